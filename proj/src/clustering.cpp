#include "vizsim/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "vizsim/csv.hpp"
#include "vizsim/error.hpp"

namespace vizsim {

namespace {

constexpr double kEntryTolerance = 1e-12;

double comb2(double m) { return m * (m - 1.0) / 2.0; }  // C(m,2) as real

}  // namespace

void DistanceMatrix::validate() const {
    if (n < 1 || d.size() != static_cast<std::size_t>(n) * n) {
        throw DomainError("distance matrix: inconsistent storage size");
    }
    for (int i = 0; i < n; ++i) {
        if (at(i, i) != 0.0) {
            std::ostringstream msg;
            msg << "distance matrix: diagonal entry (" << i << "," << i << ") is " << at(i, i);
            throw DomainError(msg.str());
        }
        for (int j = 0; j < n; ++j) {
            const double v = at(i, j);
            if (!(v >= -kEntryTolerance && v <= 1.0 + kEntryTolerance)) {
                std::ostringstream msg;
                msg << "distance matrix: entry (" << i << "," << j << ") = " << v
                    << " outside [0,1]";
                throw DomainError(msg.str());
            }
            if (at(i, j) != at(j, i)) {
                std::ostringstream msg;
                msg << "distance matrix: asymmetric at (" << i << "," << j << "): " << at(i, j)
                    << " vs " << at(j, i);
                throw DomainError(msg.str());
            }
        }
    }
}

Clustering Clustering::from_labels(const std::vector<int>& labels) {
    Clustering c;
    c.n = static_cast<int>(labels.size());
    std::map<int, std::vector<int>> by_label;  // ordered -> deterministic groups
    for (int i = 0; i < c.n; ++i) by_label[labels[static_cast<std::size_t>(i)]].push_back(i);
    for (auto& [label, members] : by_label) c.groups.push_back(std::move(members));
    return c;
}

std::vector<int> Clustering::labels() const {
    validate();
    if (allow_overlap) throw DomainError("labels(): clustering allows overlap");
    std::vector<int> out(static_cast<std::size_t>(n), -1);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (int item : groups[g]) out[static_cast<std::size_t>(item)] = static_cast<int>(g);
    }
    return out;
}

void Clustering::validate() const {
    if (n < 1) throw DomainError("clustering: item count must be positive");
    std::vector<int> count(static_cast<std::size_t>(n), 0);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].empty()) {
            std::ostringstream msg;
            msg << "clustering: group " << g << " is empty";
            throw DomainError(msg.str());
        }
        for (int item : groups[g]) {
            if (item < 0 || item >= n) {
                std::ostringstream msg;
                msg << "clustering: item id " << item << " outside [0," << n << ")";
                throw DomainError(msg.str());
            }
            ++count[static_cast<std::size_t>(item)];
        }
    }
    for (int i = 0; i < n; ++i) {
        const int c = count[static_cast<std::size_t>(i)];
        if (c == 0) {
            std::ostringstream msg;
            msg << "clustering: item " << i << " belongs to no group";
            throw DomainError(msg.str());
        }
        if (c > 1 && !allow_overlap) {
            std::ostringstream msg;
            msg << "clustering: item " << i << " belongs to " << c
                << " groups in a hard clustering";
            throw DomainError(msg.str());
        }
    }
}

namespace {

template <typename ImageT, typename ScoreFn>
DistanceMatrix pairwise_distances(const std::vector<ImageT>& images, ScoreFn score) {
    const int n = static_cast<int>(images.size());
    if (n < 2) throw DomainError("distance_matrix: need at least 2 images");
    for (int i = 1; i < n; ++i) {
        if (!images[0].same_size(images[static_cast<std::size_t>(i)])) {
            std::ostringstream msg;
            msg << "distance_matrix: image " << i << " dimensions ("
                << images[static_cast<std::size_t>(i)].width << "x"
                << images[static_cast<std::size_t>(i)].height << ") differ from image 0 ("
                << images[0].width << "x" << images[0].height << ")";
            throw DimensionError(msg.str());
        }
    }
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    DistanceMatrix out(n);
    const int total = static_cast<int>(pairs.size());
    bool failed = false;
    std::string failure;
#pragma omp parallel for schedule(dynamic)
    for (int p = 0; p < total; ++p) {
        if (failed) continue;
        try {
            const auto [i, j] = pairs[static_cast<std::size_t>(p)];
            const double s =
                score(images[static_cast<std::size_t>(i)], images[static_cast<std::size_t>(j)]);
            const double dist = similarity_to_distance(s);
            out.at(i, j) = dist;
            out.at(j, i) = dist;
        } catch (const std::exception& e) {
#pragma omp critical
            {
                if (!failed) {
                    failed = true;
                    failure = e.what();
                }
            }
        }
    }
    if (failed) throw DomainError(failure);
    return out;
}

}  // namespace

DistanceMatrix distance_matrix(const std::vector<Plane>& images, const MsSsimParams& params) {
    return pairwise_distances(images, [&](const Plane& a, const Plane& b) {
        return ms_ssim(a, b, params);
    });
}

DistanceMatrix distance_matrix(const std::vector<ImageRGB>& images, const MsSsimParams& params) {
    return pairwise_distances(images, [&](const ImageRGB& a, const ImageRGB& b) {
        return combine_profile(pair_profile(a, b, params), params.weights);
    });
}

DistanceMatrix consensus_distance(const std::vector<Clustering>& participants) {
    if (participants.empty()) throw DomainError("consensus_distance: no participants");
    const int n = participants.front().n;
    for (std::size_t p = 0; p < participants.size(); ++p) {
        if (participants[p].n != n) {
            std::ostringstream msg;
            msg << "consensus_distance: participant " << p << " covers " << participants[p].n
                << " items, expected " << n;
            throw DomainError(msg.str());
        }
        participants[p].validate();
    }
    DistanceMatrix out(n);
    for (const Clustering& c : participants) {
        // c_i per item and c_ij per pair for this participant
        std::vector<int> ci(static_cast<std::size_t>(n), 0);
        std::vector<int> cij(static_cast<std::size_t>(n) * n, 0);
        for (const std::vector<int>& group : c.groups) {
            for (int a : group) {
                ++ci[static_cast<std::size_t>(a)];
                for (int b : group) {
                    if (b > a) ++cij[static_cast<std::size_t>(a) * n + b];
                }
            }
        }
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const int mn = std::min(ci[static_cast<std::size_t>(i)],
                                        ci[static_cast<std::size_t>(j)]);
                const double together =
                    static_cast<double>(cij[static_cast<std::size_t>(i) * n + j]);
                out.at(i, j) += 1.0 - together / static_cast<double>(mn);
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(participants.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = out.at(i, j) * inv;
            out.at(i, j) = v;
            out.at(j, i) = v;
        }
    }
    out.validate();
    return out;
}

std::pair<Dendrogram, Clustering> ward_cluster(const DistanceMatrix& dist, int k) {
    dist.validate();
    const int n = dist.n;
    if (k < 1 || k > n) {
        std::ostringstream msg;
        msg << "ward_cluster: k = " << k << " outside [1," << n << "]";
        throw DomainError(msg.str());
    }

    // Active clusters keyed by scipy-style ids; squared inter-cluster
    // distances updated with the Lance-Williams Ward coefficients.
    struct Active {
        int id;
        int size;
    };
    std::vector<Active> active;
    active.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) active.push_back({i, 1});

    // sq[a][b] over positions in `active`
    std::vector<std::vector<double>> sq(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) sq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            dist.at(i, j) * dist.at(i, j);
    }

    std::vector<std::vector<int>> members(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) members[static_cast<std::size_t>(i)] = {i};

    Dendrogram dendrogram;
    Clustering cut;
    cut.n = n;

    int next_id = n;
    while (active.size() > 1) {
        // locate the closest pair; ties resolved toward the smallest id pair
        std::size_t best_a = 0, best_b = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < active.size(); ++a) {
            for (std::size_t b = a + 1; b < active.size(); ++b) {
                const double v = sq[a][b];
                if (v < best) {
                    best = v;
                    best_a = a;
                    best_b = b;
                } else if (v == best) {
                    const int lo = std::min(active[a].id, active[b].id);
                    const int hi = std::max(active[a].id, active[b].id);
                    const int cur_lo = std::min(active[best_a].id, active[best_b].id);
                    const int cur_hi = std::max(active[best_a].id, active[best_b].id);
                    if (lo < cur_lo || (lo == cur_lo && hi < cur_hi)) {
                        best_a = a;
                        best_b = b;
                    }
                }
            }
        }

        const int na = active[best_a].size;
        const int nb = active[best_b].size;
        MergeStep step;
        step.a = std::min(active[best_a].id, active[best_b].id);
        step.b = std::max(active[best_a].id, active[best_b].id);
        step.height = std::sqrt(best);
        step.size = na + nb;
        dendrogram.merges.push_back(step);

        // Lance-Williams Ward update against every other active cluster
        std::vector<double> merged_sq(active.size(), 0.0);
        for (std::size_t c = 0; c < active.size(); ++c) {
            if (c == best_a || c == best_b) continue;
            const int nc = active[c].size;
            merged_sq[c] = ((na + nc) * sq[best_a][c] + (nb + nc) * sq[best_b][c] -
                            nc * sq[best_a][best_b]) /
                           static_cast<double>(na + nb + nc);
        }

        std::vector<int> merged_members = members[best_a];
        merged_members.insert(merged_members.end(), members[best_b].begin(),
                              members[best_b].end());
        std::sort(merged_members.begin(), merged_members.end());

        // replace position best_a with the merged cluster, drop best_b
        active[best_a] = {next_id++, na + nb};
        members[best_a] = std::move(merged_members);
        for (std::size_t c = 0; c < active.size(); ++c) {
            sq[best_a][c] = merged_sq[c];
            sq[c][best_a] = merged_sq[c];
        }
        sq[best_a][best_a] = 0.0;

        const std::size_t last = active.size() - 1;
        if (best_b != last) {
            active[best_b] = active[last];
            members[best_b] = std::move(members[last]);
            for (std::size_t c = 0; c < active.size(); ++c) {
                sq[best_b][c] = sq[last][c];
                sq[c][best_b] = sq[c][last];
            }
            sq[best_b][best_b] = 0.0;
        }
        active.pop_back();
        members.pop_back();
        for (auto& row : sq) row.pop_back();
        sq.pop_back();

        if (static_cast<int>(active.size()) == k) {
            std::vector<std::vector<int>> groups(members.begin(), members.end());
            std::sort(groups.begin(), groups.end(),
                      [](const std::vector<int>& x, const std::vector<int>& y) {
                          return x.front() < y.front();
                      });
            cut.groups = std::move(groups);
        }
    }
    if (k == n) {
        for (int i = 0; i < n; ++i) cut.groups.push_back({i});
    }
    cut.validate();
    return {std::move(dendrogram), std::move(cut)};
}

QualityScores cluster_quality(const Clustering& a, const Clustering& b) {
    a.validate();
    b.validate();
    if (a.allow_overlap || b.allow_overlap) {
        throw DomainError("cluster_quality: requires hard clusterings");
    }
    if (a.n != b.n) {
        std::ostringstream msg;
        msg << "cluster_quality: item counts differ (" << a.n << " vs " << b.n << ")";
        throw DomainError(msg.str());
    }
    const int n = a.n;
    const std::vector<int> la = a.labels();
    const std::vector<int> lb = b.labels();
    const int ka = static_cast<int>(a.groups.size());
    const int kb = static_cast<int>(b.groups.size());

    // contingency table
    std::vector<long> table(static_cast<std::size_t>(ka) * kb, 0);
    std::vector<long> row(static_cast<std::size_t>(ka), 0);
    std::vector<long> col(static_cast<std::size_t>(kb), 0);
    for (int i = 0; i < n; ++i) {
        const int ra = la[static_cast<std::size_t>(i)];
        const int cb = lb[static_cast<std::size_t>(i)];
        ++table[static_cast<std::size_t>(ra) * kb + cb];
        ++row[static_cast<std::size_t>(ra)];
        ++col[static_cast<std::size_t>(cb)];
    }

    double sum_comb_cells = 0.0;
    for (long v : table) sum_comb_cells += comb2(static_cast<double>(v));
    double sum_comb_row = 0.0;
    for (long v : row) sum_comb_row += comb2(static_cast<double>(v));
    double sum_comb_col = 0.0;
    for (long v : col) sum_comb_col += comb2(static_cast<double>(v));
    const double total_pairs = comb2(static_cast<double>(n));

    QualityScores out;

    // Rand index: pairs classified the same way by both clusterings
    if (total_pairs > 0.0) {
        out.ri = (total_pairs + 2.0 * sum_comb_cells - sum_comb_row - sum_comb_col) /
                 total_pairs;
    } else {
        out.ri = 1.0;
    }

    // adjusted Rand index, permutation-model expectation
    const double expected = (total_pairs > 0.0) ? sum_comb_row * sum_comb_col / total_pairs : 0.0;
    const double max_index = 0.5 * (sum_comb_row + sum_comb_col);
    if (max_index == expected) {
        out.ari = 1.0;  // both clusterings trivially identical pair structure
    } else {
        out.ari = (sum_comb_cells - expected) / (max_index - expected);
    }

    // mutual information and entropies (natural log)
    const double dn = static_cast<double>(n);
    double mi = 0.0;
    for (int i = 0; i < ka; ++i) {
        for (int j = 0; j < kb; ++j) {
            const long nij = table[static_cast<std::size_t>(i) * kb + j];
            if (nij == 0) continue;
            const double p = static_cast<double>(nij) / dn;
            mi += p * std::log(dn * static_cast<double>(nij) /
                               (static_cast<double>(row[static_cast<std::size_t>(i)]) *
                                static_cast<double>(col[static_cast<std::size_t>(j)])));
        }
    }
    mi = std::max(mi, 0.0);
    double ha = 0.0;
    for (long v : row) {
        const double p = static_cast<double>(v) / dn;
        ha -= p * std::log(p);
    }
    double hb = 0.0;
    for (long v : col) {
        const double p = static_cast<double>(v) / dn;
        hb -= p * std::log(p);
    }

    if (ka == 1 && kb == 1) {
        // zero entropy on both sides: identical trivial clusterings
        out.nmi = 1.0;
        out.ami = 1.0;
        return out;
    }

    const double mean_h = 0.5 * (ha + hb);
    out.nmi = (mi == 0.0) ? 0.0 : mi / mean_h;

    // expected MI under the hypergeometric model of random labelings with
    // fixed marginals
    double emi = 0.0;
    const double lg_n1 = std::lgamma(dn + 1.0);
    for (int i = 0; i < ka; ++i) {
        const double ai = static_cast<double>(row[static_cast<std::size_t>(i)]);
        for (int j = 0; j < kb; ++j) {
            const double bj = static_cast<double>(col[static_cast<std::size_t>(j)]);
            const long start = std::max(1L, static_cast<long>(ai + bj - dn));
            const long end = static_cast<long>(std::min(ai, bj));
            for (long nij = start; nij <= end; ++nij) {
                const double x = static_cast<double>(nij);
                const double term = (x / dn) * std::log(dn * x / (ai * bj));
                const double log_weight =
                    std::lgamma(ai + 1.0) + std::lgamma(bj + 1.0) +
                    std::lgamma(dn - ai + 1.0) + std::lgamma(dn - bj + 1.0) - lg_n1 -
                    std::lgamma(x + 1.0) - std::lgamma(ai - x + 1.0) -
                    std::lgamma(bj - x + 1.0) - std::lgamma(dn - ai - bj + x + 1.0);
                emi += term * std::exp(log_weight);
            }
        }
    }

    const double normalizer = std::max(ha, hb);
    double denominator = normalizer - emi;
    // keep the sign but avoid dividing by zero, as the reference
    // implementations of this index do
    const double eps = std::numeric_limits<double>::epsilon();
    if (denominator < 0.0) {
        denominator = std::min(denominator, -eps);
    } else {
        denominator = std::max(denominator, eps);
    }
    out.ami = (mi - emi) / denominator;
    return out;
}

Clustering read_clustering_csv(const std::string& path, bool allow_overlap) {
    const csv::Table table = csv::read_file(path);
    const std::size_t item_col = table.column("item_id");
    const std::size_t group_col = table.column("group_id");
    std::map<long, std::vector<int>> by_group;
    int max_item = -1;
    for (const csv::Row& row : table.rows) {
        const long item = csv::parse_long(row[item_col]);
        const long group = csv::parse_long(row[group_col]);
        by_group[group].push_back(static_cast<int>(item));
        max_item = std::max(max_item, static_cast<int>(item));
    }
    Clustering c;
    c.n = max_item + 1;
    c.allow_overlap = allow_overlap;
    for (auto& [group, members] : by_group) {
        std::sort(members.begin(), members.end());
        c.groups.push_back(std::move(members));
    }
    c.validate();
    return c;
}

void write_clustering_csv(const std::string& path, const Clustering& clustering) {
    csv::Table table;
    table.header = {"item_id", "group_id"};
    for (std::size_t g = 0; g < clustering.groups.size(); ++g) {
        for (int item : clustering.groups[g]) {
            table.rows.push_back({std::to_string(item), std::to_string(g)});
        }
    }
    csv::write_file(path, table);
}

DistanceMatrix read_distance_csv(const std::string& path) {
    const csv::Table table = csv::read_file(path);
    const int n = static_cast<int>(table.rows.size());
    if (static_cast<int>(table.columns()) != n) {
        std::ostringstream msg;
        msg << "distance csv: " << table.rows.size() << " rows but " << table.columns()
            << " columns";
        throw IoError(msg.str());
    }
    DistanceMatrix out(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            out.at(i, j) = csv::parse_double(table.rows[static_cast<std::size_t>(i)]
                                                       [static_cast<std::size_t>(j)]);
        }
    }
    out.validate();
    return out;
}

void write_distance_csv(const std::string& path, const DistanceMatrix& dist) {
    csv::Table table;
    for (int j = 0; j < dist.n; ++j) table.header.push_back("d" + std::to_string(j));
    for (int i = 0; i < dist.n; ++i) {
        csv::Row row;
        for (int j = 0; j < dist.n; ++j) row.push_back(csv::format_double(dist.at(i, j)));
        table.rows.push_back(std::move(row));
    }
    csv::write_file(path, table);
}

void write_dendrogram_csv(const std::string& path, const Dendrogram& dendrogram) {
    csv::Table table;
    table.header = {"cluster_a", "cluster_b", "height", "size"};
    for (const MergeStep& step : dendrogram.merges) {
        table.rows.push_back({std::to_string(step.a), std::to_string(step.b),
                              csv::format_double(step.height), std::to_string(step.size)});
    }
    csv::write_file(path, table);
}

}  // namespace vizsim
