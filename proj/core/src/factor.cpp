#include "newsminer/factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/SVD>

namespace newsminer {

Dendrogram hac(const std::vector<std::string>& labels,
               const std::vector<Eigen::VectorXd>& vectors, Linkage linkage) {
    const std::size_t n = vectors.size();
    if (n < 2) throw std::runtime_error("hac needs at least 2 vectors");
    for (const auto& v : vectors)
        if (v.size() != vectors[0].size())
            throw std::runtime_error("hac: dimension mismatch");
    if (labels.size() != n) throw std::runtime_error("hac: label count mismatch");

    // stable label order drives the tie-break
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[order[i]] = i;

    Eigen::MatrixXd point_dist(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            point_dist(i, j) = (vectors[i] - vectors[j]).norm();

    struct Cluster {
        int node_id;
        std::vector<std::size_t> members;
        std::size_t min_rank;  // of any member label, for tie-breaking
    };
    std::vector<Cluster> clusters;
    for (std::size_t i = 0; i < n; ++i)
        clusters.push_back({static_cast<int>(i), {i}, rank[i]});

    auto cluster_dist = [&](const Cluster& a, const Cluster& b) {
        double best = linkage == Linkage::single
                          ? std::numeric_limits<double>::infinity()
                          : 0.0;
        double sum = 0.0;
        for (auto i : a.members) {
            for (auto j : b.members) {
                double d = point_dist(i, j);
                sum += d;
                if (linkage == Linkage::single)
                    best = std::min(best, d);
                else
                    best = std::max(best, d);
            }
        }
        if (linkage == Linkage::average)
            return sum / (a.members.size() * b.members.size());
        return best;
    };

    Dendrogram dendrogram;
    dendrogram.leaf_labels = labels;
    int next_id = static_cast<int>(n);
    while (clusters.size() > 1) {
        std::size_t best_a = 0, best_b = 1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < clusters.size(); ++a) {
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                double d = cluster_dist(clusters[a], clusters[b]);
                auto lo = std::min(clusters[a].min_rank, clusters[b].min_rank);
                auto hi = std::max(clusters[a].min_rank, clusters[b].min_rank);
                auto blo = std::min(clusters[best_a].min_rank, clusters[best_b].min_rank);
                auto bhi = std::max(clusters[best_a].min_rank, clusters[best_b].min_rank);
                if (d < best_d ||
                    (d == best_d && (lo < blo || (lo == blo && hi < bhi)))) {
                    best_d = d;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        auto& ca = clusters[best_a];
        auto& cb = clusters[best_b];
        dendrogram.merges.push_back({ca.node_id, cb.node_id, best_d, next_id});
        ca.node_id = next_id++;
        ca.members.insert(ca.members.end(), cb.members.begin(), cb.members.end());
        ca.min_rank = std::min(ca.min_rank, cb.min_rank);
        clusters.erase(clusters.begin() + static_cast<long>(best_b));
    }
    return dendrogram;
}

Eigen::MatrixXd tfidf_transform(const Eigen::MatrixXd& counts) {
    const auto rows = counts.rows();
    const auto cols = counts.cols();
    Eigen::VectorXd df = Eigen::VectorXd::Zero(cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            if (counts(i, j) > 0) df(j) += 1.0;

    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        double idf = std::log((1.0 + rows) / (1.0 + df(j))) + 1.0;
        out.col(j) = counts.col(j) * idf;
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
        double norm = out.row(i).norm();
        if (norm > 0) out.row(i) /= norm;
    }
    return out;
}

namespace {

void soft_threshold(Eigen::MatrixXd& m, double t) {
    if (t <= 0) return;
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        double v = m.data()[i];
        m.data()[i] = v > t ? v - t : (v < -t ? v + t : 0.0);
    }
}

std::vector<int> top_support(const Eigen::VectorXd& loadings) {
    Eigen::VectorXd a = loadings.cwiseAbs();
    double mean = a.mean();
    double var = (a.array() - mean).square().sum() / a.size();
    double cut = mean + std::sqrt(var);
    std::vector<int> out;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a(i) > cut) out.push_back(static_cast<int>(i));
    return out;
}

}  // namespace

std::vector<BiclusterFactor> bicluster(const Eigen::MatrixXd& matrix, int k,
                                       double sparsity, int max_iterations,
                                       unsigned seed) {
    (void)seed;  // initialization is a deterministic truncated SVD
    const auto m = matrix.rows();
    const auto n = matrix.cols();
    if (k < 1 || k > std::min(m, n))
        throw std::runtime_error("bicluster: rank out of range");

    double x_norm2 = matrix.squaredNorm();
    Eigen::MatrixXd row_f, col_f;  // m x k, n x k
    if (x_norm2 == 0.0) {
        row_f = Eigen::MatrixXd::Zero(m, k);
        col_f = Eigen::MatrixXd::Zero(n, k);
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix,
                                              Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXd s = svd.singularValues().head(k).cwiseSqrt();
        row_f = svd.matrixU().leftCols(k) * s.asDiagonal();
        col_f = svd.matrixV().leftCols(k) * s.asDiagonal();

        double prev_fit = -1.0;
        for (int iter = 0; iter < max_iterations; ++iter) {
            // proximal gradient step on each factor; step 1/L keeps the
            // penalized objective non-increasing
            Eigen::MatrixXd gram_c = col_f.transpose() * col_f;
            double l_row = std::max(gram_c.operatorNorm(), 1e-12);
            Eigen::MatrixXd grad_row = (row_f * col_f.transpose() - matrix) * col_f;
            row_f -= grad_row / l_row;
            soft_threshold(row_f, sparsity / l_row);

            Eigen::MatrixXd gram_r = row_f.transpose() * row_f;
            double l_col = std::max(gram_r.operatorNorm(), 1e-12);
            Eigen::MatrixXd grad_col = (col_f * row_f.transpose() - matrix.transpose()) * row_f;
            col_f -= grad_col / l_col;
            soft_threshold(col_f, sparsity / l_col);

            double fit = 1.0 - (matrix - row_f * col_f.transpose()).squaredNorm() / x_norm2;
            if (prev_fit >= 0 && std::abs(fit - prev_fit) < 1e-6) break;
            prev_fit = fit;
        }
    }

    std::vector<BiclusterFactor> factors;
    for (int f = 0; f < k; ++f) {
        BiclusterFactor bf;
        bf.row_loadings = row_f.col(f);
        bf.col_loadings = col_f.col(f);
        double explained =
            x_norm2 > 0 ? (bf.row_loadings * bf.col_loadings.transpose()).squaredNorm() /
                              x_norm2
                        : 0.0;
        bf.cohesiveness = std::clamp(explained, 0.0, 1.0);
        bf.top_rows = top_support(bf.row_loadings);
        bf.top_cols = top_support(bf.col_loadings);
        factors.push_back(std::move(bf));
    }
    std::stable_sort(factors.begin(), factors.end(), [](const auto& a, const auto& b) {
        return a.cohesiveness > b.cohesiveness;
    });
    return factors;
}

namespace {

// mode-n unfolding with the usual cyclic column ordering
Eigen::MatrixXd unfold(const Tensor3& t, int mode) {
    const int I = t.dims[0], J = t.dims[1], K = t.dims[2];
    Eigen::MatrixXd m;
    if (mode == 0) {
        m.resize(I, static_cast<Eigen::Index>(J) * K);
        for (int k = 0; k < K; ++k)
            for (int j = 0; j < J; ++j)
                for (int i = 0; i < I; ++i) m(i, j + static_cast<Eigen::Index>(J) * k) = t.at(i, j, k);
    } else if (mode == 1) {
        m.resize(J, static_cast<Eigen::Index>(I) * K);
        for (int k = 0; k < K; ++k)
            for (int j = 0; j < J; ++j)
                for (int i = 0; i < I; ++i) m(j, i + static_cast<Eigen::Index>(I) * k) = t.at(i, j, k);
    } else {
        m.resize(K, static_cast<Eigen::Index>(I) * J);
        for (int k = 0; k < K; ++k)
            for (int j = 0; j < J; ++j)
                for (int i = 0; i < I; ++i) m(k, i + static_cast<Eigen::Index>(I) * j) = t.at(i, j, k);
    }
    return m;
}

Tensor3 fold(const Eigen::MatrixXd& m, int mode, std::array<int, 3> dims) {
    Tensor3 t;
    t.dims = dims;
    t.values.assign(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2], 0.0);
    const int I = dims[0], J = dims[1], K = dims[2];
    for (int k = 0; k < K; ++k)
        for (int j = 0; j < J; ++j)
            for (int i = 0; i < I; ++i) {
                if (mode == 0)
                    t.at(i, j, k) = m(i, j + static_cast<Eigen::Index>(J) * k);
                else if (mode == 1)
                    t.at(i, j, k) = m(j, i + static_cast<Eigen::Index>(I) * k);
                else
                    t.at(i, j, k) = m(k, i + static_cast<Eigen::Index>(I) * j);
            }
    return t;
}

Tensor3 mode_multiply(const Tensor3& t, const Eigen::MatrixXd& m, int mode) {
    Eigen::MatrixXd unf = unfold(t, mode);
    Eigen::MatrixXd result = m * unf;
    std::array<int, 3> dims = t.dims;
    dims[static_cast<std::size_t>(mode)] = static_cast<int>(m.rows());
    return fold(result, mode, dims);
}

Eigen::MatrixXd leading_left_singular(const Eigen::MatrixXd& m, int rank) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
    return svd.matrixU().leftCols(rank);
}

}  // namespace

TuckerModel tucker3(const Tensor3& tensor, int rank_p, int rank_q, int rank_r,
                    int max_iterations) {
    const int I = tensor.dims[0], J = tensor.dims[1], K = tensor.dims[2];
    if (rank_p < 1 || rank_p > I || rank_q < 1 || rank_q > J || rank_r < 1 || rank_r > K)
        throw std::runtime_error("tucker3: rank exceeds dimension");

    double x_norm2 = 0.0;
    for (double v : tensor.values) x_norm2 += v * v;
    if (x_norm2 == 0.0) throw std::runtime_error("tucker3: zero tensor");

    // HOSVD initialization
    Eigen::MatrixXd A = leading_left_singular(unfold(tensor, 0), rank_p);
    Eigen::MatrixXd B = leading_left_singular(unfold(tensor, 1), rank_q);
    Eigen::MatrixXd C = leading_left_singular(unfold(tensor, 2), rank_r);

    TuckerModel model;
    double prev_fit = -1.0;
    for (int iter = 0; iter < max_iterations; ++iter) {
        Tensor3 y = mode_multiply(mode_multiply(tensor, B.transpose(), 1), C.transpose(), 2);
        A = leading_left_singular(unfold(y, 0), rank_p);
        y = mode_multiply(mode_multiply(tensor, A.transpose(), 0), C.transpose(), 2);
        B = leading_left_singular(unfold(y, 1), rank_q);
        y = mode_multiply(mode_multiply(tensor, A.transpose(), 0), B.transpose(), 1);
        C = leading_left_singular(unfold(y, 2), rank_r);

        Tensor3 core = mode_multiply(y, C.transpose(), 2);
        double core_norm2 = 0.0;
        for (double v : core.values) core_norm2 += v * v;
        double fit = core_norm2 / x_norm2;  // residual^2 = ||X||^2 - ||G||^2
        model.fit_history.push_back(fit);
        model.core = std::move(core);
        if (prev_fit >= 0 && fit - prev_fit < 1e-8) {
            prev_fit = fit;
            break;
        }
        prev_fit = fit;
    }
    model.factor_a = std::move(A);
    model.factor_b = std::move(B);
    model.factor_c = std::move(C);
    model.fit = prev_fit;
    return model;
}

std::vector<std::pair<std::string, std::array<double, 2>>> project(
    const TuckerModel& model, TuckerMode mode, int component_i, int component_j,
    const std::vector<std::string>& labels) {
    const Eigen::MatrixXd& factor =
        mode == TuckerMode::newsmakers
            ? model.factor_a
            : (mode == TuckerMode::tags ? model.factor_b : model.factor_c);
    if (component_i == component_j || component_i < 0 || component_j < 0 ||
        component_i >= factor.cols() || component_j >= factor.cols())
        throw std::runtime_error("project: invalid component pair");
    if (static_cast<Eigen::Index>(labels.size()) != factor.rows())
        throw std::runtime_error("project: label count mismatch");

    std::vector<std::pair<std::string, std::array<double, 2>>> out;
    for (Eigen::Index r = 0; r < factor.rows(); ++r)
        out.push_back({labels[static_cast<std::size_t>(r)],
                       {factor(r, component_i), factor(r, component_j)}});
    return out;
}

}  // namespace newsminer
