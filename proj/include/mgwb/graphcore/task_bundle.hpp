#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace mgwb {

struct SubgraphTask {
  std::vector<int> nodes;  // sorted unique
  double target = 0.0;
};

// Downstream task data for one graph: node labels with a stratified split,
// link-prediction folds with matched negatives, and subgraph regression
// targets. Test folds sit behind accessors so the protocol can lock them
// until Stage 2 scoring.
class TaskBundle {
 public:
  std::vector<int> node_labels;  // 3 classes
  std::vector<int> node_train, node_val;
  std::vector<std::pair<int, int>> link_train_pos, link_train_neg;
  std::vector<std::pair<int, int>> link_val_pos, link_val_neg;
  std::vector<SubgraphTask> subgraphs;
  std::vector<int> subgraph_train, subgraph_val;

  void lock_test_folds() const { test_locked_ = true; }
  void unlock_test_folds() const { test_locked_ = false; }
  bool test_folds_locked() const { return test_locked_; }

  const std::vector<int>& node_test() const { return guard(node_test_); }
  const std::vector<std::pair<int, int>>& link_test_pos() const {
    return guard(link_test_pos_);
  }
  const std::vector<std::pair<int, int>>& link_test_neg() const {
    return guard(link_test_neg_);
  }
  const std::vector<int>& subgraph_test() const { return guard(subgraph_test_); }

  void set_node_test(std::vector<int> v) { node_test_ = std::move(v); }
  void set_link_test(std::vector<std::pair<int, int>> pos,
                     std::vector<std::pair<int, int>> neg) {
    link_test_pos_ = std::move(pos);
    link_test_neg_ = std::move(neg);
  }
  void set_subgraph_test(std::vector<int> v) { subgraph_test_ = std::move(v); }

 private:
  template <typename T>
  const T& guard(const T& field) const {
    if (test_locked_)
      throw std::logic_error("test fold accessed while locked (stage isolation)");
    return field;
  }

  mutable bool test_locked_ = false;
  std::vector<int> node_test_;
  std::vector<std::pair<int, int>> link_test_pos_, link_test_neg_;
  std::vector<int> subgraph_test_;
};

}  // namespace mgwb
