#include "foggrid/params.hpp"

#include "foggrid/errors.hpp"

namespace foggrid::nn {

void ParamSet::add(const std::string& name, Matrix value) {
    if (has(name)) throw UsageError("ParamSet: duplicate name '" + name + "'");
    index_[name] = entries_.size();
    entries_.emplace_back(name, std::move(value));
}

const Matrix& ParamSet::at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw UsageError("ParamSet: no parameter '" + name + "'");
    return entries_[it->second].second;
}

Matrix& ParamSet::at(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw UsageError("ParamSet: no parameter '" + name + "'");
    return entries_[it->second].second;
}

long ParamSet::total_values() const {
    long n = 0;
    for (const auto& [name, m] : entries_) n += m.size();
    return n;
}

std::vector<std::string> ParamSet::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [name, m] : entries_) out.push_back(name);
    return out;
}

void ParamSet::require_same_layout(const ParamSet& other, const char* what) const {
    if (size() != other.size())
        throw ShapeError(std::string(what) + ": parameter sets differ in size (" +
                         std::to_string(size()) + " vs " + std::to_string(other.size()) + ")");
    for (size_t i = 0; i < size(); ++i) {
        const auto& [name, m] = entries_[i];
        const auto& [oname, om] = other.entries_[i];
        if (name != oname)
            throw ShapeError(std::string(what) + ": parameter name mismatch at slot " +
                             std::to_string(i) + " ('" + name + "' vs '" + oname + "')");
        if (!m.same_shape(om))
            throw ShapeError(std::string(what) + ": parameter '" + name + "' shapes " +
                             m.shape_str() + " vs " + om.shape_str());
    }
}

}  // namespace foggrid::nn
