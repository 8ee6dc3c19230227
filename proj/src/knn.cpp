#include "strata/knn.hpp"

#include "strata/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace strata {

DistanceSpace DistanceSpace::fit(const Dataset& ds, std::optional<std::size_t> exclude) {
    DistanceSpace s;
    s.kinds.resize(ds.arity());
    s.ranges.resize(ds.arity());
    s.active.assign(ds.arity(), true);
    for (std::size_t c = 0; c < ds.arity(); ++c) {
        s.kinds[c] = ds.column(c).kind();
        if (exclude && *exclude == c) s.active[c] = false;
        if (s.kinds[c] != ColumnKind::numeric) continue;
        bool seen = false;
        for (std::size_t r = 0; r < ds.rows(); ++r) {
            const Cell& x = ds.at(r, c);
            if (x.missing()) continue;
            if (!seen) s.ranges[c] = {x.number(), x.number()};
            s.ranges[c].min = std::min(s.ranges[c].min, x.number());
            s.ranges[c].max = std::max(s.ranges[c].max, x.number());
            seen = true;
        }
    }
    return s;
}

double DistanceSpace::normalize(std::size_t column, double value) const {
    const NumericRange& r = ranges[column];
    // A constant column carries no distance.
    if (!(r.max > r.min)) return 0.0;
    return std::clamp((value - r.min) / (r.max - r.min), 0.0, 1.0);
}

void DistanceSpace::encode(std::span<const Cell> row, std::span<double> out) const {
    for (std::size_t c = 0; c < row.size(); ++c) {
        const Cell& x = row[c];
        if (x.missing()) out[c] = std::numeric_limits<double>::quiet_NaN();
        else if (x.is_nominal()) out[c] = static_cast<double>(x.category());
        else out[c] = normalize(c, x.number());
    }
}

double DistanceSpace::encoded_distance(const double* a, const double* b) const {
    double sum = 0.0;
    for (std::size_t c = 0; c < kinds.size(); ++c) {
        if (!active[c]) continue;
        const double x = a[c], y = b[c];
        if (std::isnan(x) || std::isnan(y)) {
            sum += 1.0;
        } else if (kinds[c] == ColumnKind::nominal) {
            sum += x != y ? 1.0 : 0.0;
        } else {
            const double d = x - y;
            sum += d * d;
        }
    }
    return std::sqrt(sum);
}

double mixed_distance(std::span<const Cell> a, std::span<const Cell> b, const DistanceSpace& space) {
    if (a.size() != space.kinds.size() || b.size() != space.kinds.size())
        throw PredictionError("mixed_distance: row arity does not match the schema");
    std::vector<double> ea(a.size()), eb(b.size());
    space.encode(a, ea);
    space.encode(b, eb);
    return space.encoded_distance(ea.data(), eb.data());
}

KnnModel::KnnModel(Dataset training, KnnParams params) : params_(params) {
    const std::size_t label = training.label_index();
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < training.rows(); ++r)
        if (!training.at(r, label).missing()) keep.push_back(r);
    training_ = keep.size() == training.rows() ? std::move(training) : training.select_rows(keep);
    label_index_ = label;
    if (training_.rows() == 0) throw TrainingError("k-NN: empty training set");
    if (params_.k < 1 || params_.k > training_.rows())
        throw TrainingError("k-NN: k = " + std::to_string(params_.k) + " must lie in [1, " +
                            std::to_string(training_.rows()) + "]");
    space_ = DistanceSpace::fit(training_, label_index_);
    const std::size_t arity = training_.arity();
    encoded_.resize(training_.rows() * arity);
    labels_.resize(training_.rows());
    for (std::size_t r = 0; r < training_.rows(); ++r) {
        space_.encode(training_.row(r), std::span<double>(encoded_.data() + r * arity, arity));
        labels_[r] = training_.at(r, label_index_).category();
    }
}

std::vector<std::pair<double, std::size_t>> KnnModel::nearest(std::span<const Cell> row) const {
    const std::size_t arity = training_.arity();
    if (row.size() != arity)
        throw PredictionError("row has " + std::to_string(row.size()) + " cells, model schema has " +
                              std::to_string(arity));
    if (labels_.empty()) throw PredictionError("k-NN: empty model");
    std::vector<double> query(arity);
    space_.encode(row, query);
    std::vector<std::pair<double, std::size_t>> dist(labels_.size());
    for (std::size_t r = 0; r < labels_.size(); ++r)
        dist[r] = {space_.encoded_distance(query.data(), encoded_.data() + r * arity), r};
    const auto kth = dist.begin() + static_cast<std::ptrdiff_t>(params_.k);
    std::partial_sort(dist.begin(), kth, dist.end());
    dist.resize(params_.k);
    return dist;
}

std::vector<std::size_t> KnnModel::neighbours(std::span<const Cell> row) const {
    std::vector<std::size_t> out;
    for (const auto& [d, r] : nearest(row)) out.push_back(r);
    return out;
}

CategoryId KnnModel::predict(std::span<const Cell> row) const {
    const std::size_t classes = training_.column(label_index_).category_count();
    std::vector<std::size_t> votes(classes, 0);
    std::vector<double> dist_sum(classes, 0.0);
    for (const auto& [d, r] : nearest(row)) {
        const auto y = static_cast<std::size_t>(labels_[r]);
        ++votes[y];
        dist_sum[y] += d;
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < classes; ++c) {
        if (votes[c] == 0) continue;
        if (votes[best] == 0 || votes[c] > votes[best]) {
            best = c;
        } else if (votes[c] == votes[best]) {
            const double mean_c = dist_sum[c] / static_cast<double>(votes[c]);
            const double mean_b = dist_sum[best] / static_cast<double>(votes[best]);
            if (mean_c < mean_b) best = c;
        }
    }
    return static_cast<CategoryId>(best);
}

KnnModel train_knn(const Dataset& train, const KnnParams& params) { return KnnModel(train, params); }

} // namespace strata
