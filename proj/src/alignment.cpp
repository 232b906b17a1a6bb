#include "sweat/alignment.hpp"

#include <unordered_set>

#include <fmt/format.h>

#include "sweat/association.hpp"
#include "sweat/error.hpp"

namespace sweat {

namespace {

Eigen::MatrixXd gather(const EmbeddingSpace& space, const std::vector<std::string>& words) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(words.size()), static_cast<Eigen::Index>(space.dimension()));
    for (std::size_t i = 0; i < words.size(); ++i) {
        Vector v = space.vector(words[i]);
        for (std::size_t k = 0; k < v.size(); ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v[k];
    }
    return m;
}

} // namespace

std::vector<std::string> shared_vocabulary(const EmbeddingSpace& a, const EmbeddingSpace& b) {
    std::vector<std::string> out;
    for (const auto& w : a.words())
        if (b.contains(w)) out.push_back(w);
    return out;
}

double orthogonality_error(const Eigen::MatrixXd& rotation) {
    const Eigen::MatrixXd gram = rotation.transpose() * rotation;
    return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

AlignmentResult procrustes_align(const EmbeddingSpace& source, const EmbeddingSpace& target,
                                 const std::vector<std::string>& anchors, AlignmentOptions options) {
    if (source.dimension() != target.dimension())
        throw DataError(fmt::format("cannot align '{}' (dimension {}) onto '{}' (dimension {})", source.label(),
                                    source.dimension(), target.label(), target.dimension()));
    std::vector<std::string> used;
    std::unordered_set<std::string_view> seen;
    for (const auto& w : anchors)
        if (seen.insert(w).second) used.push_back(w);
    if (used.empty()) throw DataError("no anchors given for alignment");
    const EmbeddingSpace* spaces[] = {&source, &target};
    require_words(used, spaces);

    const auto dim = static_cast<Eigen::Index>(source.dimension());
    Eigen::MatrixXd src = gather(source, used);
    Eigen::MatrixXd tgt = gather(target, used);

    AlignmentReport report;
    report.source_label = source.label();
    report.target_label = target.label();
    report.centered = options.center;
    report.source_mean = Eigen::RowVectorXd::Zero(dim);
    report.target_mean = Eigen::RowVectorXd::Zero(dim);
    if (options.center) {
        report.source_mean = src.colwise().mean();
        report.target_mean = tgt.colwise().mean();
    }
    const Eigen::MatrixXd cross =
        (src.rowwise() - report.source_mean).transpose() * (tgt.rowwise() - report.target_mean);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    report.rotation = svd.matrixU() * svd.matrixV().transpose();
    if (!report.rotation.allFinite() || orthogonality_error(report.rotation) > 1e-8)
        throw DataError("alignment SVD failed to produce an orthogonal solution");

    const auto& sv = svd.singularValues();
    const double cutoff = 1e-10 * std::max(sv.size() > 0 ? sv(0) : 0.0, 1e-300);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > cutoff;
    report.underdetermined = rank < dim;

    // x -> (x - mu_s) R + mu_t  ==  x R + offset
    const Eigen::RowVectorXd offset = report.target_mean - report.source_mean * report.rotation;

    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> all(source.data().data(), static_cast<Eigen::Index>(source.size()), dim);
    RowMajor mapped = all * report.rotation;
    if (options.center) mapped.rowwise() += offset;

    std::vector<double> data(mapped.data(), mapped.data() + mapped.size());
    EmbeddingSpace aligned(source.label(), source.dimension(), source.words(), std::move(data));

    const Eigen::MatrixXd mapped_anchors = gather(aligned, used);
    report.residual = (mapped_anchors - tgt).rowwise().squaredNorm().mean();
    report.anchors_used = std::move(used);
    return {std::move(aligned), std::move(report)};
}

bool round_trip_stable(std::string_view word, const EmbeddingSpace& space1, const EmbeddingSpace& space2) {
    const std::string w(word);
    const EmbeddingSpace* spaces[] = {&space1, &space2};
    require_words(std::span(&w, 1), spaces);
    return nearest_neighbor(space2, space1.vector(w)) == w && nearest_neighbor(space1, space2.vector(w)) == w;
}

} // namespace sweat
