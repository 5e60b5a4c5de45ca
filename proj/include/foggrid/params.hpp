#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "foggrid/matrix.hpp"

namespace foggrid::nn {

/// Named, insertion-ordered collection of parameter matrices. Iteration order
/// is fixed at construction and identical across runs, which the checkpoint
/// format and SGD/soft-update loops rely on.
class ParamSet {
public:
    void add(const std::string& name, Matrix value);

    bool has(const std::string& name) const { return index_.count(name) > 0; }
    const Matrix& at(const std::string& name) const;
    Matrix& at(const std::string& name);

    size_t size() const { return entries_.size(); }
    long total_values() const;

    const std::pair<std::string, Matrix>& entry(size_t i) const { return entries_[i]; }
    std::pair<std::string, Matrix>& entry(size_t i) { return entries_[i]; }

    std::vector<std::string> names() const;

    /// Throws ShapeError unless `other` has the same keys and shapes in the
    /// same order.
    void require_same_layout(const ParamSet& other, const char* what) const;

    bool operator==(const ParamSet& o) const { return entries_ == o.entries_; }

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

private:
    std::vector<std::pair<std::string, Matrix>> entries_;
    std::unordered_map<std::string, size_t> index_;
};

/// Gradients d(loss)/d(parameter): same key set and shapes as the ParamSet
/// they were computed for.
using GradientSet = ParamSet;

}  // namespace foggrid::nn
