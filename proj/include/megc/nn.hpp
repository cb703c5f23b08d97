#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "megc/rng.hpp"

namespace megc {

enum class Activation { Identity, Relu, Tanh };

// Dense layer, weights row-major: w[o * in + i].
struct Layer {
    int in = 0;
    int out = 0;
    std::vector<double> w;
    std::vector<double> b;
};

// Fully connected net. `hidden` applies after every layer but the last,
// `output` after the last.
struct Mlp {
    std::vector<Layer> layers;
    Activation hidden = Activation::Relu;
    Activation output = Activation::Identity;

    std::size_t param_count() const;
    std::vector<int> dims() const;  // [in, h1, ..., out]
};

// Hidden layers start at U(+-1/sqrt(fan_in)); the final layer at
// U(+-final_init_bound) so initial outputs sit near zero.
Mlp make_mlp(const std::vector<int>& dims, Activation hidden, Activation output,
             RandomStream& rng, double final_init_bound = 3e-3);

std::vector<double> mlp_forward(const Mlp& net, const std::vector<double>& x);

// Intermediate values needed by backprop: act[0] is the input, act[k] the
// post-activation output of layer k-1; pre[k] the pre-activation of layer k.
struct ForwardCache {
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> act;
};

std::vector<double> mlp_forward_cached(const Mlp& net, const std::vector<double>& x,
                                       ForwardCache& cache);

// Same-shaped zero net, used as a gradient accumulator.
Mlp zeros_like(const Mlp& net);

// Accumulates d(loss)/d(params) into `grad` (+=) given d(loss)/d(output);
// optionally also returns d(loss)/d(input).
void mlp_backward(const Mlp& net, const ForwardCache& cache,
                  const std::vector<double>& grad_out, Mlp& grad,
                  std::vector<double>* grad_input = nullptr);

// d(loss)/d(input) only, leaving parameters alone.
std::vector<double> mlp_input_gradient(const Mlp& net, const ForwardCache& cache,
                                       const std::vector<double>& grad_out);

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    long t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

AdamState make_adam_state(const Mlp& net);

// One Adam update of `net` along -grad. `grads` must be shaped like `net`.
void adam_step(Mlp& net, const Mlp& grads, AdamState& state, double lr);

// target <- tau * online + (1 - tau) * target, elementwise.
void soft_update(Mlp& target, const Mlp& online, double tau);

void flatten(const Mlp& net, std::vector<double>& out);
void unflatten(const std::vector<double>& flat, Mlp& net);

// Text serialization; doubles stored as hex bit patterns so a round trip
// is byte-exact.
void write_mlp(std::ostream& os, const Mlp& net);
Mlp read_mlp(std::istream& is);

std::string double_to_hex(double x);
double hex_to_double(const std::string& s);

}  // namespace megc
