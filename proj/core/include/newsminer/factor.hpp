#ifndef NEWSMINER_FACTOR_HPP
#define NEWSMINER_FACTOR_HPP

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace newsminer {

enum class Linkage { average, complete, single };

struct Merge {
    int node_a = 0;
    int node_b = 0;
    double distance = 0.0;
    int new_node_id = 0;
};

struct Dendrogram {
    std::vector<std::string> leaf_labels;
    std::vector<Merge> merges;  // n-1 merges; leaves are 0..n-1, new ids n..2n-2
};

struct BiclusterFactor {
    Eigen::VectorXd row_loadings;
    Eigen::VectorXd col_loadings;
    double cohesiveness = 0.0;  // explained-variance share
    std::vector<int> top_rows;  // |loading| above mean + 1 sigma
    std::vector<int> top_cols;
};

struct Tensor3 {
    std::array<int, 3> dims{};  // index layout i + I*(j + J*k)
    std::vector<double> values;

    double& at(int i, int j, int k) {
        return values[i + static_cast<std::size_t>(dims[0]) * (j + static_cast<std::size_t>(dims[1]) * k)];
    }
    double at(int i, int j, int k) const {
        return values[i + static_cast<std::size_t>(dims[0]) * (j + static_cast<std::size_t>(dims[1]) * k)];
    }
};

struct TuckerModel {
    Tensor3 core;
    Eigen::MatrixXd factor_a;  // newsmakers x p, column-orthonormal
    Eigen::MatrixXd factor_b;  // tags x q
    Eigen::MatrixXd factor_c;  // providers x r
    double fit = 0.0;  // 1 - ||X - Xhat||^2_F / ||X||^2_F
    std::vector<double> fit_history;
};

Dendrogram hac(const std::vector<std::string>& labels,
               const std::vector<Eigen::VectorXd>& vectors,
               Linkage linkage = Linkage::average);

// TF-IDF with smoothed idf, then row L2 normalization.
Eigen::MatrixXd tfidf_transform(const Eigen::MatrixXd& counts);

// Rank-K sparse factorization X ~ sum_k lambda_k z_k^T by alternating
// proximal (soft-threshold) updates; factors sorted by cohesiveness.
std::vector<BiclusterFactor> bicluster(const Eigen::MatrixXd& matrix, int k,
                                       double sparsity = 0.0, int max_iterations = 500,
                                       unsigned seed = 42);

TuckerModel tucker3(const Tensor3& tensor, int rank_p, int rank_q, int rank_r,
                    int max_iterations = 200);

enum class TuckerMode { newsmakers, tags, providers };

std::vector<std::pair<std::string, std::array<double, 2>>> project(
    const TuckerModel& model, TuckerMode mode, int component_i, int component_j,
    const std::vector<std::string>& labels);

}  // namespace newsminer

#endif
