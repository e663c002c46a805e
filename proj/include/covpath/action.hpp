#pragma once

#include <algorithm>
#include <deque>
#include <vector>

namespace covpath {

// Normalised control: a_v scales v_max, a_w scales w_max.
struct Action {
  double a_v = 0.0;
  double a_w = 0.0;

  Action() = default;
  Action(double v, double w) : a_v(std::clamp(v, -1.0, 1.0)), a_w(std::clamp(w, -1.0, 1.0)) {}
  friend bool operator==(const Action&, const Action&) = default;
};

// The k most recent actions, oldest first, zero-padded until k are seen.
class ActionHistory {
 public:
  explicit ActionHistory(int k = 0) : k_(k) { clear(); }

  int size() const { return k_; }
  void clear() { items_.assign(static_cast<std::size_t>(k_), Action{}); }
  void push(const Action& a) {
    if (k_ == 0) return;
    items_.pop_front();
    items_.push_back(a);
  }
  const std::deque<Action>& items() const { return items_; }

 private:
  int k_ = 0;
  std::deque<Action> items_;
};

}  // namespace covpath
