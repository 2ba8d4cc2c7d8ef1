#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "test_util.hpp"
#include "vizsim/clustering.hpp"
#include "vizsim/csv.hpp"
#include "vizsim/error.hpp"
#include "vizsim/reference.hpp"
#include "vizsim/rng.hpp"

using namespace vizsim;
using namespace vizsim::testutil;

namespace {

DistanceMatrix matrix_from(int n, const std::vector<double>& rows) {
    DistanceMatrix m(n);
    m.d = rows;
    m.validate();
    return m;
}

// agreement-count Rand index computed by a direct pair loop, independent of
// the library's contingency-table path
double brute_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    const int n = static_cast<int>(a.size());
    int agree = 0, total = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const bool same_a = a[i] == a[j];
            const bool same_b = b[i] == b[j];
            if (same_a == same_b) ++agree;
            ++total;
        }
    }
    return static_cast<double>(agree) / total;
}

Clustering overlap_clustering(int n, std::vector<std::vector<int>> groups) {
    Clustering c;
    c.n = n;
    c.groups = std::move(groups);
    c.allow_overlap = true;
    c.validate();
    return c;
}

}  // namespace

TEST_SUITE_BEGIN("clustering");

TEST_CASE("distance matrix validation enforces the metric envelope") {
    CHECK_NOTHROW(matrix_from(2, {0.0, 0.3, 0.3, 0.0}));
    CHECK_THROWS_AS(matrix_from(2, {0.0, 0.3, 0.4, 0.0}), DomainError);   // asymmetric
    CHECK_THROWS_AS(matrix_from(2, {0.1, 0.3, 0.3, 0.0}), DomainError);   // diagonal
    CHECK_THROWS_AS(matrix_from(2, {0.0, 1.3, 1.3, 0.0}), DomainError);   // out of range
    CHECK_THROWS_AS(matrix_from(2, {0.0, -0.1, -0.1, 0.0}), DomainError); // negative
}

TEST_CASE("pairwise distances of identical images vanish") {
    Rng rng(61);
    const Plane x = random_plane(16, 16, rng);
    const DistanceMatrix d = distance_matrix(std::vector<Plane>{x, x},
                                             MsSsimParams{WeightVector({1.0, 1.0}), {}, {}});
    for (double v : d.d) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("distance ordering follows distortion severity") {
    Rng rng(62);
    const Plane x = random_plane(16, 16, rng);
    Plane heavy = x;
    for (double& s : heavy.samples) s = std::min(1.0, std::max(0.0, s + rng.uniform(-0.4, 0.4)));
    const MsSsimParams p{WeightVector({1.0, 1.0}), {}, {}};
    const DistanceMatrix d = distance_matrix({x, x, heavy}, p);
    CHECK(d.at(0, 1) < d.at(0, 2));
    CHECK(d.at(0, 2) > 0.0);
}

TEST_CASE("matrix assembly equals a direct per-pair loop bit-exactly") {
    Rng rng(63);
    std::vector<Plane> images;
    for (int i = 0; i < 4; ++i) images.push_back(random_plane(12, 12, rng));
    const MsSsimParams p{WeightVector({1.0, 1.0}), {}, {}};
    const DistanceMatrix d = distance_matrix(images, p);
    d.validate();
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            const double direct = similarity_to_distance(ms_ssim(images[i], images[j], p));
            CHECK(bits_equal(d.at(i, j), direct));
            CHECK(bits_equal(d.at(j, i), direct));
        }
    }
    // and the serial reference agrees within the oracle tolerance
    const auto slow = ref::distance_matrix(images, p);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            CHECK(std::abs(d.at(i, j) - slow[i][j]) < 1e-9);
        }
    }
}

TEST_CASE("mismatched image dimensions name the offending pair") {
    std::vector<Plane> images{Plane(8, 8, 0.2), Plane(8, 9, 0.4)};
    try {
        distance_matrix(images, MsSsimParams{WeightVector({1.0}), {}, {}});
        FAIL("expected a dimension error");
    } catch (const DimensionError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("0") != std::string::npos);
        CHECK(msg.find("1") != std::string::npos);
    }
}

TEST_CASE("consensus distance spans the unit interval") {
    // two participants, three items; groupings as label vectors
    const Clustering always_a = Clustering::from_labels({0, 0, 1});
    const Clustering always_b = Clustering::from_labels({1, 1, 0});
    const DistanceMatrix together = consensus_distance({always_a, always_b});
    CHECK(together.at(0, 1) == 0.0);  // co-grouped by everyone
    CHECK(together.at(0, 2) == 1.0);  // never co-grouped

    const Clustering split = Clustering::from_labels({0, 1, 1});
    const DistanceMatrix half = consensus_distance({always_a, split});
    CHECK(half.at(0, 1) == 0.5);  // co-grouped by exactly one of two
}

TEST_CASE("consensus distance accepts overlapping memberships") {
    // item 1 sits in both groups; c_1 = 2, c_01 = 1, c_0 = 1
    const Clustering overlap = overlap_clustering(3, {{0, 1}, {1, 2}});
    const Clustering plain = Clustering::from_labels({0, 0, 1});
    const DistanceMatrix d = consensus_distance({overlap, plain});
    // participant 1: 1 - 1/min(1,2) = 0; participant 2: 0  -> 0
    CHECK(d.at(0, 1) == 0.0);
    // participant 1: item 2 shares a group with 1: 1 - 1/min(2,1) = 0;
    // participant 2: never co-grouped: 1  -> 0.5
    CHECK(d.at(1, 2) == 0.5);
    d.validate();
}

TEST_CASE("consensus distance rejects absent items") {
    Clustering missing;
    missing.n = 3;
    missing.groups = {{0, 1}};  // item 2 nowhere
    missing.allow_overlap = true;
    const Clustering fine = Clustering::from_labels({0, 0, 1});
    CHECK_THROWS_AS(consensus_distance({missing, fine}), DomainError);
}

TEST_CASE("ward merges match the hierarchical reference sequence") {
    const DistanceMatrix d5 = matrix_from(
        5, {0.00, 0.10, 0.80, 0.90, 0.85,
            0.10, 0.00, 0.85, 0.95, 0.80,
            0.80, 0.85, 0.00, 0.15, 0.20,
            0.90, 0.95, 0.15, 0.00, 0.25,
            0.85, 0.80, 0.20, 0.25, 0.00});
    const auto [dendrogram, cut] = ward_cluster(d5, 2);
    REQUIRE(dendrogram.merges.size() == 4);

    const int expect_a[4] = {0, 2, 4, 5};
    const int expect_b[4] = {1, 3, 6, 7};
    const double expect_h[4] = {0.10000000000000001, 0.14999999999999999, 0.24664414311581237,
                                1.3174470261329929};
    const int expect_size[4] = {2, 2, 3, 5};
    for (int i = 0; i < 4; ++i) {
        CHECK(dendrogram.merges[i].a == expect_a[i]);
        CHECK(dendrogram.merges[i].b == expect_b[i]);
        CHECK(dendrogram.merges[i].height == doctest::Approx(expect_h[i]).epsilon(1e-12));
        CHECK(dendrogram.merges[i].size == expect_size[i]);
    }
    // heights never decrease
    for (int i = 1; i < 4; ++i) {
        CHECK(dendrogram.merges[i].height >= dendrogram.merges[i - 1].height);
    }
    // the 2-cut separates {0,1} from {2,3,4}
    const std::vector<int> labels = cut.labels();
    CHECK(labels[0] == labels[1]);
    CHECK(labels[2] == labels[3]);
    CHECK(labels[2] == labels[4]);
    CHECK(labels[0] != labels[2]);
}

TEST_CASE("ward cut extremes produce singletons and one blob") {
    const DistanceMatrix d = matrix_from(3, {0.0, 0.2, 0.6, 0.2, 0.0, 0.5, 0.6, 0.5, 0.0});
    const auto [dend_n, singles] = ward_cluster(d, 3);
    CHECK(singles.groups.size() == 3);
    for (const auto& g : singles.groups) CHECK(g.size() == 1);

    const auto [dend_1, all] = ward_cluster(d, 1);
    REQUIRE(all.groups.size() == 1);
    CHECK(all.groups[0].size() == 3);

    CHECK_THROWS_AS(ward_cluster(d, 0), DomainError);
    CHECK_THROWS_AS(ward_cluster(d, 4), DomainError);
}

TEST_CASE("ward recovers well-separated blobs") {
    // blobs {0,1,2} and {3,4,5}: tight inside, far apart
    DistanceMatrix d(6);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            if (i == j) continue;
            const bool same = (i < 3) == (j < 3);
            d.at(i, j) = same ? 0.01 : 0.9;
        }
    }
    const auto [dendrogram, cut] = ward_cluster(d, 2);
    const std::vector<int> labels = cut.labels();
    CHECK(labels[0] == labels[1]);
    CHECK(labels[1] == labels[2]);
    CHECK(labels[3] == labels[4]);
    CHECK(labels[4] == labels[5]);
    CHECK(labels[0] != labels[3]);
}

TEST_CASE("equal-height merges break ties toward the smallest id pair") {
    DistanceMatrix d(4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i != j) d.at(i, j) = 0.9;
        }
    }
    d.at(0, 1) = d.at(1, 0) = 0.2;
    d.at(2, 3) = d.at(3, 2) = 0.2;
    const auto [dendrogram, cut] = ward_cluster(d, 2);
    CHECK(dendrogram.merges[0].a == 0);
    CHECK(dendrogram.merges[0].b == 1);
    CHECK(dendrogram.merges[1].a == 2);
    CHECK(dendrogram.merges[1].b == 3);
}

TEST_CASE("ward clustering is deterministic") {
    Rng rng(64);
    DistanceMatrix d(8);
    for (int i = 0; i < 8; ++i) {
        for (int j = i + 1; j < 8; ++j) {
            d.at(i, j) = d.at(j, i) = rng.uniform(0.05, 1.0);
        }
    }
    const auto [d1, c1] = ward_cluster(d, 3);
    const auto [d2, c2] = ward_cluster(d, 3);
    REQUIRE(d1.merges.size() == d2.merges.size());
    for (std::size_t i = 0; i < d1.merges.size(); ++i) {
        CHECK(d1.merges[i].a == d2.merges[i].a);
        CHECK(d1.merges[i].b == d2.merges[i].b);
        CHECK(bits_equal(d1.merges[i].height, d2.merges[i].height));
    }
    CHECK(c1.groups == c2.groups);
}

TEST_CASE("perfect agreement scores one on every index") {
    const Clustering a = Clustering::from_labels({0, 0, 1, 1, 2, 2});
    const Clustering relabeled = Clustering::from_labels({5, 5, 3, 3, 9, 9});
    const QualityScores q = cluster_quality(a, relabeled);
    CHECK(q.ri == 1.0);
    CHECK(q.ari == 1.0);
    CHECK(q.nmi == 1.0);
    CHECK(q.ami == 1.0);
    CHECK(q.nmi_normalization == "arithmetic");
    CHECK(q.ami_normalization == "max");
}

TEST_CASE("crossed pairs fixture gives the hand-enumerated indices") {
    const Clustering a = Clustering::from_labels({0, 0, 1, 1});
    const Clustering b = Clustering::from_labels({0, 1, 0, 1});
    const QualityScores q = cluster_quality(a, b);
    CHECK(q.ri == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(q.ari == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("index fixture matches independently computed scores") {
    const std::vector<int> la = {0, 0, 0, 1, 1, 2, 2, 2, 1, 0};
    const std::vector<int> lb = {0, 0, 1, 1, 1, 2, 2, 0, 2, 0};
    const QualityScores q = cluster_quality(Clustering::from_labels(la),
                                            Clustering::from_labels(lb));
    CHECK(q.ari == doctest::Approx(0.20454545454545456).epsilon(1e-9));
    CHECK(q.ami == doctest::Approx(0.2372887777013355).epsilon(1e-9));
    CHECK(q.nmi == doctest::Approx(0.44270128334605002).epsilon(1e-9));
    CHECK(q.ri == doctest::Approx(brute_rand_index(la, lb)).epsilon(1e-12));
}

TEST_CASE("quality indices are symmetric and label-permutation invariant") {
    Rng rng(65);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<int> la(12), lb(12);
        for (int i = 0; i < 12; ++i) {
            la[i] = static_cast<int>(rng.uniform_index(3));
            lb[i] = static_cast<int>(rng.uniform_index(4));
        }
        const Clustering a = Clustering::from_labels(la);
        const Clustering b = Clustering::from_labels(lb);
        const QualityScores ab = cluster_quality(a, b);
        const QualityScores ba = cluster_quality(b, a);
        CHECK(ab.ri == doctest::Approx(ba.ri).epsilon(1e-12));
        CHECK(ab.ari == doctest::Approx(ba.ari).epsilon(1e-12));
        CHECK(ab.nmi == doctest::Approx(ba.nmi).epsilon(1e-12));
        CHECK(ab.ami == doctest::Approx(ba.ami).epsilon(1e-12));

        // permute b's label names; index values must not move
        std::vector<int> lp(12);
        for (int i = 0; i < 12; ++i) lp[i] = (lb[i] * 7 + 3) % 11;
        const QualityScores perm = cluster_quality(a, Clustering::from_labels(lp));
        CHECK(perm.ari == doctest::Approx(ab.ari).epsilon(1e-12));
        CHECK(perm.ami == doctest::Approx(ab.ami).epsilon(1e-12));
    }
}

TEST_CASE("random labelings center the adjusted indices near zero") {
    Rng rng(66);
    double sum_ari = 0.0, sum_ami = 0.0, sum_nmi = 0.0;
    const int trials = 60;
    for (int t = 0; t < trials; ++t) {
        std::vector<int> la(60), lb(60);
        for (int i = 0; i < 60; ++i) {
            la[i] = static_cast<int>(rng.uniform_index(6));
            lb[i] = static_cast<int>(rng.uniform_index(6));
        }
        const QualityScores q = cluster_quality(Clustering::from_labels(la),
                                                Clustering::from_labels(lb));
        sum_ari += q.ari;
        sum_ami += q.ami;
        sum_nmi += q.nmi;
    }
    CHECK(std::abs(sum_ari / trials) < 0.1);
    CHECK(std::abs(sum_ami / trials) < 0.1);
    // chance adjustment pulls the mutual-information score down
    CHECK(sum_nmi / trials > sum_ami / trials);
}

TEST_CASE("quality indices reject overlapping input") {
    const Clustering overlap = overlap_clustering(3, {{0, 1}, {1, 2}});
    const Clustering hard = Clustering::from_labels({0, 0, 1});
    CHECK_THROWS_AS(cluster_quality(overlap, hard), DomainError);
}

TEST_CASE("single-cluster against single-cluster is a perfect match") {
    const Clustering a = Clustering::from_labels({0, 0, 0});
    const QualityScores q = cluster_quality(a, a);
    CHECK(q.ri == 1.0);
    CHECK(q.ari == 1.0);
    CHECK(q.nmi == 1.0);
    CHECK(q.ami == 1.0);
}

TEST_CASE("clustering csv round trips including overlap") {
    TempDir dir("vizsim_cluster_csv");
    const std::string path = dir.file("clusters.csv");
    const Clustering hard = Clustering::from_labels({0, 1, 1, 0, 2});
    write_clustering_csv(path, hard);
    const Clustering back = read_clustering_csv(path, false);
    CHECK(back.n == 5);
    CHECK(back.labels() == hard.labels());

    const Clustering overlap = overlap_clustering(3, {{0, 1}, {1, 2}});
    const std::string path2 = dir.file("overlap.csv");
    write_clustering_csv(path2, overlap);
    const Clustering back2 = read_clustering_csv(path2, true);
    CHECK(back2.groups == overlap.groups);
    // the same file is rejected when overlap is not allowed
    CHECK_THROWS_AS(read_clustering_csv(path2, false), DomainError);
}

TEST_CASE("distance csv round trips exactly") {
    TempDir dir("vizsim_dist_csv");
    const std::string path = dir.file("dist.csv");
    Rng rng(67);
    DistanceMatrix d(4);
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) d.at(i, j) = d.at(j, i) = rng.uniform(0.0, 1.0);
    }
    write_distance_csv(path, d);
    const DistanceMatrix back = read_distance_csv(path);
    REQUIRE(back.n == 4);
    for (int i = 0; i < 16; ++i) CHECK(bits_equal(back.d[i], d.d[i]));
}

TEST_CASE("dendrogram csv lists one merge per row") {
    TempDir dir("vizsim_dend_csv");
    const std::string path = dir.file("dend.csv");
    const DistanceMatrix d = matrix_from(3, {0.0, 0.2, 0.6, 0.2, 0.0, 0.5, 0.6, 0.5, 0.0});
    const auto [dendrogram, cut] = ward_cluster(d, 1);
    write_dendrogram_csv(path, dendrogram);
    const csv::Table t = csv::read_file(path);
    REQUIRE(t.header == csv::Row({"cluster_a", "cluster_b", "height", "size"}));
    REQUIRE(t.rows.size() == 2);
    CHECK(csv::parse_long(t.rows[0][0]) == dendrogram.merges[0].a);
    CHECK(csv::parse_double(t.rows[1][2]) == dendrogram.merges[1].height);
}

TEST_SUITE_END();
