#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cbr/rng.hpp"

namespace cbr {

struct TensorNode;
using NodePtr = std::shared_ptr<TensorNode>;

struct TensorNode {
    std::vector<size_t> shape;
    std::vector<double> val;
    std::vector<double> grad;  // empty until touched by backward
    bool requires_grad = false;
    const char* op = "leaf";
    std::vector<NodePtr> parents;
    std::function<void(TensorNode&)> backfn;

    size_t size() const { return val.size(); }
    void ensure_grad() {
        if (grad.size() != val.size()) grad.assign(val.size(), 0.0);
    }
};

// Value-semantic handle over a graph node. Copies share the node.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(NodePtr n) : node_(std::move(n)) {}

    static Tensor scalar(double v);
    static Tensor zeros(const std::vector<size_t>& shape);
    static Tensor constant(std::vector<double> values, std::vector<size_t> shape);
    static Tensor vector1d(std::vector<double> values);
    // Trainable leaf; used by ParameterSet.
    static Tensor leaf(std::vector<double> values, std::vector<size_t> shape);

    bool defined() const { return node_ != nullptr; }
    const std::vector<size_t>& shape() const { return node_->shape; }
    size_t size() const { return node_->val.size(); }
    size_t rows() const { return node_->shape.at(0); }
    size_t cols() const { return node_->shape.at(1); }
    bool is_scalar() const { return node_->shape.empty(); }

    const std::vector<double>& values() const { return node_->val; }
    std::vector<double>& mutable_values() { return node_->val; }
    double value() const;  // scalar only
    double at(size_t i) const { return node_->val.at(i); }

    bool requires_grad() const { return node_->requires_grad; }
    const std::vector<double>& grad() const;
    bool grad_populated() const { return node_->grad.size() == node_->val.size(); }
    void zero_grad() { node_->grad.clear(); }
    void populate_zero_grad() { node_->ensure_grad(); }

    NodePtr node() const { return node_; }

private:
    NodePtr node_;
};

// Tape control. Ops built while disabled compute values only.
bool grad_enabled();
struct NoGradGuard {
    NoGradGuard();
    ~NoGradGuard();
    bool prev;
};

// Reverse-mode sweep from a scalar loss. Accumulates into .grad of every
// reachable node that requires gradients. Throws on non-scalar loss.
void backward(const Tensor& loss);

// Elementwise / linear algebra
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor add_n(const std::vector<Tensor>& ts);
Tensor scale(const Tensor& a, double c);
Tensor scale_by(const Tensor& a, const Tensor& s);  // s scalar
Tensor neg(const Tensor& a);
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor matvec(const Tensor& m, const Tensor& x);
Tensor dot(const Tensor& a, const Tensor& b);
Tensor row(const Tensor& m, size_t i);

// Nonlinearities
Tensor relu(const Tensor& a);
Tensor leaky_relu(const Tensor& a, double slope = 0.01);
Tensor sigmoid(const Tensor& a);
Tensor tanh_t(const Tensor& a);
Tensor exp_t(const Tensor& a);
Tensor log_t(const Tensor& a);
Tensor sqrt_t(const Tensor& a);
Tensor softmax(const Tensor& a);  // 1-D

// Reductions / shaping
Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);
Tensor concat(const std::vector<Tensor>& ts);
Tensor slice(const Tensor& a, size_t begin, size_t len);
Tensor pick(const Tensor& a, size_t i);

// Dropout in train mode zeroes entries with probability `rate` and rescales
// the survivors by 1/(1-rate); identity in eval mode or at rate 0.
Tensor dropout(const Tensor& a, double rate, Rng& rng, bool train);

// Composites (gradients via the primitives above)
Tensor l2_sq(const Tensor& a, const Tensor& b);
Tensor cosine(const Tensor& a, const Tensor& b);

struct GruParams {
    Tensor Wz, Uz, bz;
    Tensor Wr, Ur, br;
    Tensor Wh, Uh, bh;
};
Tensor gru_cell(const GruParams& p, const Tensor& x, const Tensor& h);

// Detached copy: same values, no tape history.
Tensor detach(const Tensor& a);

// Straight-through value swap: forward value taken from `hard`, gradient
// routed entirely into `soft`. Shapes must match.
Tensor straight_through(const Tensor& hard, const Tensor& soft);

}  // namespace cbr
