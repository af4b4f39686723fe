#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "arglink/tensor.hpp"

namespace arglink {

/// One node of the computation graph: a value, its gradient slot, and the
/// rule that pushes the gradient into the parents.
struct AgNode {
  Tensor value;
  Tensor grad;  // allocated only when needs_grad
  bool needs_grad = false;
  std::vector<AgNode*> parents;
  std::function<void(AgNode&)> backprop;
};

using Var = AgNode*;

/// Arena that owns graph nodes in creation order. Creation order is a
/// topological order by construction, so backward() is a single reverse
/// sweep. One backward pass per tape.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = default;
  Tape& operator=(Tape&&) = default;

  std::size_t size() const { return nodes_.size(); }

  Var leaf(Tensor value, bool needs_grad = false) {
    return make(std::move(value), needs_grad, {}, nullptr);
  }

  Var constant(Tensor value) { return leaf(std::move(value), false); }

  Var matvec(Var w, Var x) {
    Tensor out = arglink::matvec(w->value, x->value);
    return make(std::move(out), w->needs_grad || x->needs_grad, {w, x}, [](AgNode& n) {
      AgNode* w = n.parents[0];
      AgNode* x = n.parents[1];
      const std::size_t m = w->value.dim(0), k = w->value.dim(1);
      if (w->needs_grad) {
        for (std::size_t i = 0; i < m; ++i) {
          const double g = n.grad[i];
          for (std::size_t p = 0; p < k; ++p) w->grad.at(i, p) += g * x->value[p];
        }
      }
      if (x->needs_grad) {
        for (std::size_t i = 0; i < m; ++i) {
          const double g = n.grad[i];
          for (std::size_t p = 0; p < k; ++p) x->grad[p] += g * w->value.at(i, p);
        }
      }
    });
  }

  Var add(Var a, Var b) {
    Tensor out = arglink::add(a->value, b->value);
    return make(std::move(out), a->needs_grad || b->needs_grad, {a, b}, [](AgNode& n) {
      for (AgNode* p : n.parents) {
        if (!p->needs_grad) continue;
        for (std::size_t i = 0; i < n.grad.size(); ++i) p->grad[i] += n.grad[i];
      }
    });
  }

  Var mul(Var a, Var b) {
    Tensor out = arglink::mul(a->value, b->value);
    return make(std::move(out), a->needs_grad || b->needs_grad, {a, b}, [](AgNode& n) {
      AgNode* a = n.parents[0];
      AgNode* b = n.parents[1];
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        if (a->needs_grad) a->grad[i] += n.grad[i] * b->value[i];
        if (b->needs_grad) b->grad[i] += n.grad[i] * a->value[i];
      }
    });
  }

  /// Elementwise product with a fixed tensor (dropout masks and the like).
  Var mul_mask(Var x, Tensor mask) {
    require_same_shape(x->value, mask, "mul_mask");
    Tensor out = arglink::mul(x->value, mask);
    auto m = std::make_shared<Tensor>(std::move(mask));
    return make(std::move(out), x->needs_grad, {x}, [m](AgNode& n) {
      AgNode* x = n.parents[0];
      if (!x->needs_grad) return;
      for (std::size_t i = 0; i < n.grad.size(); ++i) x->grad[i] += n.grad[i] * (*m)[i];
    });
  }

  Var sigmoid(Var x) {
    Tensor out = arglink::sigmoid(x->value);
    return make(std::move(out), x->needs_grad, {x}, [](AgNode& n) {
      AgNode* x = n.parents[0];
      if (!x->needs_grad) return;
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        const double s = n.value[i];
        x->grad[i] += n.grad[i] * s * (1.0 - s);
      }
    });
  }

  Var tanh_op(Var x) {
    Tensor out = arglink::tanh_op(x->value);
    return make(std::move(out), x->needs_grad, {x}, [](AgNode& n) {
      AgNode* x = n.parents[0];
      if (!x->needs_grad) return;
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        const double t = n.value[i];
        x->grad[i] += n.grad[i] * (1.0 - t * t);
      }
    });
  }

  Var concat(Var a, Var b) {
    Tensor out = arglink::concat(a->value, b->value);
    return make(std::move(out), a->needs_grad || b->needs_grad, {a, b}, [](AgNode& n) {
      AgNode* a = n.parents[0];
      AgNode* b = n.parents[1];
      const std::size_t na = a->value.size();
      if (a->needs_grad) {
        for (std::size_t i = 0; i < na; ++i) a->grad[i] += n.grad[i];
      }
      if (b->needs_grad) {
        for (std::size_t i = 0; i < b->value.size(); ++i) b->grad[i] += n.grad[na + i];
      }
    });
  }

  /// Dot product of two rank-1 vars; result has shape [1].
  Var dot(Var a, Var b) {
    Tensor out({1});
    out[0] = arglink::dot(a->value, b->value);
    return make(std::move(out), a->needs_grad || b->needs_grad, {a, b}, [](AgNode& n) {
      AgNode* a = n.parents[0];
      AgNode* b = n.parents[1];
      const double g = n.grad[0];
      for (std::size_t i = 0; i < a->value.size(); ++i) {
        if (a->needs_grad) a->grad[i] += g * b->value[i];
        if (b->needs_grad) b->grad[i] += g * a->value[i];
      }
    });
  }

  /// Stack shape-[1] vars into one rank-1 vector.
  Var stack(const std::vector<Var>& scalars) {
    Tensor out({scalars.size()});
    bool needs = false;
    for (std::size_t i = 0; i < scalars.size(); ++i) {
      require_rank(scalars[i]->value, 1, "stack element");
      out[i] = scalars[i]->value[0];
      needs = needs || scalars[i]->needs_grad;
    }
    return make(std::move(out), needs, scalars, [](AgNode& n) {
      for (std::size_t i = 0; i < n.parents.size(); ++i) {
        if (n.parents[i]->needs_grad) n.parents[i]->grad[0] += n.grad[i];
      }
    });
  }

  /// Sum of same-shaped vars.
  Var add_all(const std::vector<Var>& terms) {
    if (terms.empty()) throw std::invalid_argument("add_all: no terms");
    Tensor out = terms[0]->value;
    bool needs = terms[0]->needs_grad;
    for (std::size_t i = 1; i < terms.size(); ++i) {
      out = arglink::add(out, terms[i]->value);
      needs = needs || terms[i]->needs_grad;
    }
    return make(std::move(out), needs, terms, [](AgNode& n) {
      for (AgNode* p : n.parents) {
        if (!p->needs_grad) continue;
        for (std::size_t i = 0; i < n.grad.size(); ++i) p->grad[i] += n.grad[i];
      }
    });
  }

  Var log_softmax(Var x) {
    Tensor out = arglink::log_softmax(x->value);
    return make(std::move(out), x->needs_grad, {x}, [](AgNode& n) {
      AgNode* x = n.parents[0];
      if (!x->needs_grad) return;
      double gsum = 0.0;
      for (std::size_t i = 0; i < n.grad.size(); ++i) gsum += n.grad[i];
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        x->grad[i] += n.grad[i] - std::exp(n.value[i]) * gsum;
      }
    });
  }

  /// Select one entry of a rank-1 var; result has shape [1].
  Var pick(Var x, std::size_t index) {
    require_rank(x->value, 1, "pick");
    if (index >= x->value.size()) throw std::invalid_argument("pick: index out of range");
    Tensor out({1});
    out[0] = x->value[index];
    return make(std::move(out), x->needs_grad, {x}, [index](AgNode& n) {
      if (n.parents[0]->needs_grad) n.parents[0]->grad[index] += n.grad[0];
    });
  }

  Var scale(Var x, double c) {
    Tensor out = x->value;
    for (double& v : out.data()) v *= c;
    return make(std::move(out), x->needs_grad, {x}, [c](AgNode& n) {
      AgNode* x = n.parents[0];
      if (!x->needs_grad) return;
      for (std::size_t i = 0; i < n.grad.size(); ++i) x->grad[i] += c * n.grad[i];
    });
  }

  /// Reverse sweep from a shape-[1] head. Gradients accumulate into every
  /// needs_grad node reachable from the head.
  void backward(Var head) {
    require_rank(head->value, 1, "backward head");
    if (head->value.size() != 1) {
      throw std::invalid_argument("backward: head must be a scalar (shape [1])");
    }
    if (!head->needs_grad) return;
    head->grad[0] = 1.0;
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
      AgNode& n = **it;
      if (n.needs_grad && n.backprop) n.backprop(n);
    }
  }

 private:
  Var make(Tensor value, bool needs_grad, std::vector<AgNode*> parents,
           std::function<void(AgNode&)> backprop) {
    auto node = std::make_unique<AgNode>();
    node->value = std::move(value);
    node->needs_grad = needs_grad;
    if (needs_grad) node->grad = Tensor::zeros(node->value.shape());
    node->parents = std::move(parents);
    node->backprop = std::move(backprop);
    nodes_.push_back(std::move(node));
    return nodes_.back().get();
  }

  std::vector<std::unique_ptr<AgNode>> nodes_;
};

}  // namespace arglink
