#pragma once

#include <vector>

#include "ssma/screen_graph.hpp"
#include "ssma/types.hpp"

namespace ssma {

/// Deterministic one-hot encoding over (task-family, screen) pairs.
/// Tasks of the same family share coordinates, which is what lets a
/// linear policy trained on one task pool generalize to held-out tasks
/// drawn from the same families.
class FeatureMap {
 public:
  FeatureMap() = default;

  explicit FeatureMap(const TaskPool& pool) {
    family_offset_.assign(pool.params.families, -1);
    for (const TaskSpec& t : pool.tasks) {
      if (family_offset_[t.family] < 0) {
        family_offset_[t.family] = 0;  // mark present; offsets assigned below
        family_screens_.resize(std::max<std::size_t>(family_screens_.size(),
                                                     t.family + 1));
        family_screens_[t.family] = t.graph.screen_count;
      }
    }
    dimension_ = 0;
    for (std::size_t f = 0; f < family_screens_.size(); ++f) {
      if (family_offset_[f] < 0) continue;
      family_offset_[f] = dimension_;
      dimension_ += family_screens_[f];
    }
  }

  int dimension() const { return dimension_; }

  int index_of(const TaskSpec& task, int screen) const {
    if (task.family < 0 || task.family >= static_cast<int>(family_offset_.size()) ||
        family_offset_[task.family] < 0) {
      throw ContractError("task family unknown to the feature map");
    }
    return family_offset_[task.family] + screen;
  }

  Vector encode(const TaskSpec& task, int screen) const {
    Vector x = Vector::Zero(dimension_);
    x(index_of(task, screen)) = 1.0;
    return x;
  }

 private:
  std::vector<int> family_offset_;
  std::vector<int> family_screens_;
  int dimension_ = 0;
};

}  // namespace ssma
