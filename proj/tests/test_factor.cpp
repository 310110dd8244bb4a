#include "doctest.h"

#include <random>
#include <set>

#include "newsminer/factor.hpp"

using namespace newsminer;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

}  // namespace

TEST_CASE("identical vectors merge first at distance zero") {
    auto d = hac({"a", "b", "c"}, {vec({0, 0}), vec({5, 5}), vec({0, 0})});
    REQUIRE(d.merges.size() == 2);
    CHECK(d.merges[0].distance == 0.0);
    // the identical pair is leaves 0 and 2
    CHECK(((d.merges[0].node_a == 0 && d.merges[0].node_b == 2) ||
           (d.merges[0].node_a == 2 && d.merges[0].node_b == 0)));
}

TEST_CASE("well-separated pairs merge before cross-pair merges") {
    auto d = hac({"a", "b", "c", "d"},
                 {vec({0, 0}), vec({0.1, 0}), vec({10, 10}), vec({10.1, 10})});
    REQUIRE(d.merges.size() == 3);
    CHECK(d.merges[0].distance == doctest::Approx(0.1));
    CHECK(d.merges[1].distance == doctest::Approx(0.1));
    CHECK(d.merges[2].distance > 10.0);
}

TEST_CASE("n=2 single merge; dimension mismatch rejected") {
    auto d = hac({"a", "b"}, {vec({0}), vec({3})});
    REQUIRE(d.merges.size() == 1);
    CHECK(d.merges[0].distance == doctest::Approx(3.0));

    CHECK_THROWS_AS(hac({"a", "b"}, {vec({0}), vec({0, 0})}), std::runtime_error);
}

TEST_CASE("average linkage merge heights are non-decreasing") {
    std::mt19937 rng(77);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::string> labels;
        std::vector<Eigen::VectorXd> points;
        int n = 4 + static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) {
            labels.push_back("p" + std::to_string(i));
            Eigen::VectorXd v(3);
            for (int k = 0; k < 3; ++k) v(k) = gauss(rng);
            points.push_back(v);
        }
        for (Linkage linkage : {Linkage::average, Linkage::complete}) {
            auto d = hac(labels, points, linkage);
            for (std::size_t i = 1; i < d.merges.size(); ++i)
                CHECK(d.merges[i].distance >= d.merges[i - 1].distance - 1e-12);
        }
    }
}

TEST_CASE("bicluster recovers a planted block") {
    std::mt19937 rng(42);
    std::normal_distribution<double> noise(0.0, 0.01);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(8, 12);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 12; ++j) x(i, j) = noise(rng);
    for (int i : {0, 1})
        for (int j = 0; j < 5; ++j) x(i, j) += 1.0;

    auto factors = bicluster(x, 1, 0.01);
    REQUIRE(factors.size() == 1);
    CHECK(factors[0].top_rows == std::vector<int>{0, 1});
    std::set<int> cols(factors[0].top_cols.begin(), factors[0].top_cols.end());
    for (int j = 0; j < 5; ++j) CHECK(cols.count(j) == 1);
}

TEST_CASE("zero matrix gives zero loadings and cohesiveness") {
    auto factors = bicluster(Eigen::MatrixXd::Zero(4, 6), 2);
    REQUIRE(factors.size() == 2);
    for (const auto& f : factors) {
        CHECK(f.cohesiveness == 0.0);
        CHECK(f.row_loadings.norm() == 0.0);
        CHECK(f.col_loadings.norm() == 0.0);
    }
}

TEST_CASE("two disjoint planted blocks recovered with high support jaccard") {
    std::mt19937 rng(7);
    std::normal_distribution<double> noise(0.0, 0.01);
    Eigen::MatrixXd x(10, 20);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 20; ++j) x(i, j) = noise(rng);
    std::set<int> rows_a = {0, 1, 2}, cols_a = {0, 1, 2, 3, 4, 5};
    std::set<int> rows_b = {6, 7, 8, 9}, cols_b = {12, 13, 14, 15, 16};
    for (int i : rows_a)
        for (int j : cols_a) x(i, j) += 1.0;
    for (int i : rows_b)
        for (int j : cols_b) x(i, j) += 0.8;

    auto factors = bicluster(x, 2, 0.01);
    REQUIRE(factors.size() == 2);
    CHECK(factors[0].cohesiveness >= factors[1].cohesiveness);

    auto jaccard = [](const std::set<int>& a, const std::vector<int>& b_vec) {
        std::set<int> b(b_vec.begin(), b_vec.end());
        int inter = 0;
        for (int x_ : a) inter += b.count(x_);
        return static_cast<double>(inter) / (a.size() + b.size() - inter);
    };
    // each planted block matched by one factor
    double best_a = 0, best_b = 0;
    for (const auto& f : factors) {
        best_a = std::max(best_a, std::min(jaccard(rows_a, f.top_rows),
                                           jaccard(cols_a, f.top_cols)));
        best_b = std::max(best_b, std::min(jaccard(rows_b, f.top_rows),
                                           jaccard(cols_b, f.top_cols)));
    }
    CHECK(best_a >= 0.9);
    CHECK(best_b >= 0.9);
}

TEST_CASE("bicluster rank out of range is rejected") {
    CHECK_THROWS_AS(bicluster(Eigen::MatrixXd::Ones(3, 5), 4), std::runtime_error);
}

TEST_CASE("bicluster is equivariant under row permutation") {
    std::mt19937 rng(3);
    Eigen::MatrixXd x(6, 9);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 9; ++j) x(i, j) = static_cast<double>(rng() % 10);
    auto base = bicluster(x, 2);

    // reverse rows
    Eigen::MatrixXd y = x.colwise().reverse();
    auto permuted = bicluster(y, 2);
    for (std::size_t f = 0; f < base.size(); ++f) {
        CHECK(permuted[f].cohesiveness ==
              doctest::Approx(base[f].cohesiveness).epsilon(1e-6));
        Eigen::VectorXd reversed = base[f].row_loadings.reverse();
        // loadings match up to global sign
        double direct = (permuted[f].row_loadings - reversed).norm();
        double flipped = (permuted[f].row_loadings + reversed).norm();
        CHECK(std::min(direct, flipped) < 1e-6);
    }
}

TEST_CASE("tfidf rows are unit length") {
    Eigen::MatrixXd counts(3, 4);
    counts << 1, 0, 2, 0, 0, 3, 0, 0, 1, 1, 1, 1;
    auto x = tfidf_transform(counts);
    for (int i = 0; i < 3; ++i) CHECK(x.row(i).norm() == doctest::Approx(1.0));
}

namespace {

Tensor3 random_tucker_tensor(int I, int J, int K, int p, int q, int r, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_orthonormal = [&](int rows, int cols) {
        Eigen::MatrixXd m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = gauss(rng);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
        return Eigen::MatrixXd(qr.householderQ() *
                               Eigen::MatrixXd::Identity(rows, cols));
    };
    Eigen::MatrixXd A = random_orthonormal(I, p);
    Eigen::MatrixXd B = random_orthonormal(J, q);
    Eigen::MatrixXd C = random_orthonormal(K, r);
    Tensor3 t;
    t.dims = {I, J, K};
    t.values.assign(static_cast<std::size_t>(I) * J * K, 0.0);
    std::vector<double> core(static_cast<std::size_t>(p) * q * r);
    for (auto& v : core) v = gauss(rng);
    for (int i = 0; i < I; ++i)
        for (int j = 0; j < J; ++j)
            for (int k = 0; k < K; ++k) {
                double s = 0;
                for (int a = 0; a < p; ++a)
                    for (int b = 0; b < q; ++b)
                        for (int c = 0; c < r; ++c)
                            s += core[a + static_cast<std::size_t>(p) * (b + static_cast<std::size_t>(q) * c)] *
                                 A(i, a) * B(j, b) * C(k, c);
                t.at(i, j, k) = s;
            }
    return t;
}

}  // namespace

TEST_CASE("tucker3 recovers an exact rank-(1,1,1) tensor") {
    auto t = random_tucker_tensor(6, 5, 4, 1, 1, 1, 9);
    auto model = tucker3(t, 1, 1, 1);
    CHECK(model.fit == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("tucker3 recovers a rank-(3,2,3) construction") {
    auto t = random_tucker_tensor(12, 8, 9, 3, 2, 3, 21);
    auto model = tucker3(t, 3, 2, 3);
    CHECK(model.fit >= 0.999);

    // orthonormality
    auto residual = [](const Eigen::MatrixXd& m) {
        return (m.transpose() * m -
                Eigen::MatrixXd::Identity(m.cols(), m.cols()))
            .cwiseAbs()
            .maxCoeff();
    };
    CHECK(residual(model.factor_a) < 1e-8);
    CHECK(residual(model.factor_b) < 1e-8);
    CHECK(residual(model.factor_c) < 1e-8);

    // fit non-decreasing per iteration
    for (std::size_t i = 1; i < model.fit_history.size(); ++i)
        CHECK(model.fit_history[i] >= model.fit_history[i - 1] - 1e-12);
}

TEST_CASE("tucker3 rejects ranks exceeding dimensions") {
    Tensor3 t;
    t.dims = {2, 2, 2};
    t.values.assign(8, 1.0);
    CHECK_THROWS_AS(tucker3(t, 3, 1, 1), std::runtime_error);
}

TEST_CASE("project emits the selected factor columns") {
    auto t = random_tucker_tensor(5, 4, 6, 2, 2, 2, 33);
    auto model = tucker3(t, 2, 2, 2);
    std::vector<std::string> labels = {"a", "b", "c", "d", "e"};
    auto coords = project(model, TuckerMode::newsmakers, 0, 1, labels);
    REQUIRE(coords.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(coords[i].first == labels[i]);
        CHECK(coords[i].second[0] ==
              doctest::Approx(model.factor_a(static_cast<Eigen::Index>(i), 0)));
    }
    // swapped components swap coordinates
    auto swapped = project(model, TuckerMode::newsmakers, 1, 0, labels);
    CHECK(swapped[0].second[0] == coords[0].second[1]);
    CHECK(swapped[0].second[1] == coords[0].second[0]);

    CHECK_THROWS_AS(project(model, TuckerMode::newsmakers, 0, 0, labels),
                    std::runtime_error);
    CHECK_THROWS_AS(project(model, TuckerMode::newsmakers, 0, 5, labels),
                    std::runtime_error);
}

TEST_CASE("separated newsmaker groups split along a component") {
    // two groups of newsmakers with distinct tag/provider patterns
    Tensor3 t;
    t.dims = {6, 4, 3};
    t.values.assign(6 * 4 * 3, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) t.at(i, 0, k) = 5.0;
    for (int i = 3; i < 6; ++i)
        for (int k = 0; k < 3; ++k) t.at(i, 1, k) = 5.0;
    auto model = tucker3(t, 2, 2, 1);
    std::vector<std::string> labels = {"a1", "a2", "a3", "b1", "b2", "b3"};
    auto coords = project(model, TuckerMode::newsmakers, 0, 1, labels);
    double mean_a = 0, mean_b = 0;
    for (int i = 0; i < 3; ++i) mean_a += coords[static_cast<std::size_t>(i)].second[0];
    for (int i = 3; i < 6; ++i) mean_b += coords[static_cast<std::size_t>(i)].second[0];
    CHECK(std::abs(mean_a - mean_b) / 3.0 > 0.1);
}
