#ifndef SWEAT_ALIGNMENT_HPP
#define SWEAT_ALIGNMENT_HPP

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sweat/embeddings.hpp"

namespace sweat {

struct AlignmentOptions {
    /// Mean-centre anchors before solving and fold the offsets back into the
    /// mapping x -> (x - mu_source) R + mu_target. Off: x -> x R.
    bool center = true;
};

struct AlignmentReport {
    Eigen::MatrixXd rotation;
    Eigen::RowVectorXd source_mean;
    Eigen::RowVectorXd target_mean;
    std::vector<std::string> anchors_used;
    double residual = 0.0; // mean squared distance over anchors
    bool underdetermined = false;
    bool centered = true;
    std::string source_label;
    std::string target_label;
};

struct AlignmentResult {
    EmbeddingSpace aligned;
    AlignmentReport report;
};

/// Orthogonal Procrustes: R minimising sum over anchors |E_src(w) R - E_tgt(w)|^2,
/// R = U V^T from the SVD of the anchor cross-covariance.
AlignmentResult procrustes_align(const EmbeddingSpace& source, const EmbeddingSpace& target,
                                 const std::vector<std::string>& anchors, AlignmentOptions options = {});

/// Words present in both spaces, in source vocabulary order.
std::vector<std::string> shared_vocabulary(const EmbeddingSpace& a, const EmbeddingSpace& b);

/// The word's vector in either space has the word itself as nearest
/// neighbour in the other space.
bool round_trip_stable(std::string_view word, const EmbeddingSpace& space1, const EmbeddingSpace& space2);

/// max |R^T R - I|.
double orthogonality_error(const Eigen::MatrixXd& rotation);

} // namespace sweat

#endif
