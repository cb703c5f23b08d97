#include "megc/nn.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace megc {

namespace {

double apply_act(Activation a, double x) {
    switch (a) {
        case Activation::Identity: return x;
        case Activation::Relu: return x > 0.0 ? x : 0.0;
        case Activation::Tanh: return std::tanh(x);
    }
    throw std::logic_error("bad activation");
}

// Derivative in terms of the pre-activation value.
double act_grad(Activation a, double pre) {
    switch (a) {
        case Activation::Identity: return 1.0;
        case Activation::Relu: return pre > 0.0 ? 1.0 : 0.0;
        case Activation::Tanh: {
            double t = std::tanh(pre);
            return 1.0 - t * t;
        }
    }
    throw std::logic_error("bad activation");
}

}  // namespace

std::size_t Mlp::param_count() const {
    std::size_t n = 0;
    for (const Layer& l : layers) n += l.w.size() + l.b.size();
    return n;
}

std::vector<int> Mlp::dims() const {
    std::vector<int> d;
    if (layers.empty()) return d;
    d.push_back(layers.front().in);
    for (const Layer& l : layers) d.push_back(l.out);
    return d;
}

Mlp make_mlp(const std::vector<int>& dims, Activation hidden, Activation output,
             RandomStream& rng, double final_init_bound) {
    if (dims.size() < 2) throw std::invalid_argument("mlp needs at least one layer");
    Mlp net;
    net.hidden = hidden;
    net.output = output;
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
        Layer l;
        l.in = dims[k];
        l.out = dims[k + 1];
        if (l.in <= 0 || l.out <= 0) throw std::invalid_argument("mlp dims must be positive");
        bool last = (k + 2 == dims.size());
        double bound = last ? final_init_bound : 1.0 / std::sqrt(static_cast<double>(l.in));
        l.w.resize(static_cast<std::size_t>(l.in) * l.out);
        l.b.resize(l.out);
        for (double& x : l.w) x = rng.uniform(-bound, bound);
        for (double& x : l.b) x = rng.uniform(-bound, bound);
        net.layers.push_back(std::move(l));
    }
    return net;
}

std::vector<double> mlp_forward(const Mlp& net, const std::vector<double>& x) {
    ForwardCache scratch;
    return mlp_forward_cached(net, x, scratch);
}

std::vector<double> mlp_forward_cached(const Mlp& net, const std::vector<double>& x,
                                       ForwardCache& cache) {
    if (net.layers.empty()) throw std::logic_error("empty mlp");
    if (static_cast<int>(x.size()) != net.layers.front().in)
        throw std::invalid_argument("mlp input size mismatch");
    cache.pre.assign(net.layers.size(), {});
    cache.act.assign(net.layers.size() + 1, {});
    cache.act[0] = x;
    for (std::size_t k = 0; k < net.layers.size(); ++k) {
        const Layer& l = net.layers[k];
        const std::vector<double>& in = cache.act[k];
        std::vector<double>& pre = cache.pre[k];
        pre.assign(l.out, 0.0);
        for (int o = 0; o < l.out; ++o) {
            double s = l.b[o];
            const double* wrow = l.w.data() + static_cast<std::size_t>(o) * l.in;
            for (int i = 0; i < l.in; ++i) s += wrow[i] * in[i];
            pre[o] = s;
        }
        Activation a = (k + 1 == net.layers.size()) ? net.output : net.hidden;
        std::vector<double>& out = cache.act[k + 1];
        out.resize(l.out);
        for (int o = 0; o < l.out; ++o) out[o] = apply_act(a, pre[o]);
    }
    return cache.act.back();
}

Mlp zeros_like(const Mlp& net) {
    Mlp z = net;
    for (Layer& l : z.layers) {
        std::fill(l.w.begin(), l.w.end(), 0.0);
        std::fill(l.b.begin(), l.b.end(), 0.0);
    }
    return z;
}

void mlp_backward(const Mlp& net, const ForwardCache& cache,
                  const std::vector<double>& grad_out, Mlp& grad,
                  std::vector<double>* grad_input) {
    if (grad.layers.size() != net.layers.size())
        throw std::invalid_argument("gradient accumulator shape mismatch");
    std::vector<double> delta = grad_out;  // d loss / d act[k+1]
    for (std::size_t k = net.layers.size(); k-- > 0;) {
        const Layer& l = net.layers[k];
        Layer& g = grad.layers[k];
        Activation a = (k + 1 == net.layers.size()) ? net.output : net.hidden;
        // Through the activation: d loss / d pre[k].
        std::vector<double> dpre(l.out);
        for (int o = 0; o < l.out; ++o) dpre[o] = delta[o] * act_grad(a, cache.pre[k][o]);
        const std::vector<double>& in = cache.act[k];
        for (int o = 0; o < l.out; ++o) {
            double d = dpre[o];
            g.b[o] += d;
            double* grow = g.w.data() + static_cast<std::size_t>(o) * l.in;
            for (int i = 0; i < l.in; ++i) grow[i] += d * in[i];
        }
        if (k == 0 && grad_input == nullptr) break;
        std::vector<double> prev(l.in, 0.0);
        for (int o = 0; o < l.out; ++o) {
            double d = dpre[o];
            const double* wrow = l.w.data() + static_cast<std::size_t>(o) * l.in;
            for (int i = 0; i < l.in; ++i) prev[i] += d * wrow[i];
        }
        delta = std::move(prev);
    }
    if (grad_input) *grad_input = std::move(delta);
}

std::vector<double> mlp_input_gradient(const Mlp& net, const ForwardCache& cache,
                                       const std::vector<double>& grad_out) {
    std::vector<double> delta = grad_out;
    for (std::size_t k = net.layers.size(); k-- > 0;) {
        const Layer& l = net.layers[k];
        Activation a = (k + 1 == net.layers.size()) ? net.output : net.hidden;
        std::vector<double> prev(l.in, 0.0);
        for (int o = 0; o < l.out; ++o) {
            double d = delta[o] * act_grad(a, cache.pre[k][o]);
            const double* wrow = l.w.data() + static_cast<std::size_t>(o) * l.in;
            for (int i = 0; i < l.in; ++i) prev[i] += d * wrow[i];
        }
        delta = std::move(prev);
    }
    return delta;
}

AdamState make_adam_state(const Mlp& net) {
    AdamState s;
    s.m.assign(net.param_count(), 0.0);
    s.v.assign(net.param_count(), 0.0);
    return s;
}

namespace {

bool same_shape(const Mlp& a, const Mlp& b) {
    if (a.layers.size() != b.layers.size()) return false;
    for (std::size_t k = 0; k < a.layers.size(); ++k) {
        if (a.layers[k].w.size() != b.layers[k].w.size()) return false;
        if (a.layers[k].b.size() != b.layers[k].b.size()) return false;
    }
    return true;
}

}  // namespace

void adam_step(Mlp& net, const Mlp& grads, AdamState& state, double lr) {
    if (state.m.size() != net.param_count())
        throw std::invalid_argument("adam state size mismatch");
    if (!same_shape(net, grads)) throw std::invalid_argument("adam gradient shape mismatch");
    state.t += 1;
    double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    std::size_t idx = 0;
    auto update = [&](double& p, double g) {
        double& m = state.m[idx];
        double& v = state.v[idx];
        m = state.beta1 * m + (1.0 - state.beta1) * g;
        v = state.beta2 * v + (1.0 - state.beta2) * g * g;
        p -= lr * (m / bc1) / (std::sqrt(v / bc2) + state.eps);
        ++idx;
    };
    for (std::size_t k = 0; k < net.layers.size(); ++k) {
        Layer& l = net.layers[k];
        const Layer& g = grads.layers[k];
        for (std::size_t j = 0; j < l.w.size(); ++j) update(l.w[j], g.w[j]);
        for (std::size_t j = 0; j < l.b.size(); ++j) update(l.b[j], g.b[j]);
    }
}

void soft_update(Mlp& target, const Mlp& online, double tau) {
    if (!same_shape(target, online)) throw std::invalid_argument("soft_update shape mismatch");
    for (std::size_t k = 0; k < target.layers.size(); ++k) {
        Layer& t = target.layers[k];
        const Layer& o = online.layers[k];
        for (std::size_t j = 0; j < t.w.size(); ++j)
            t.w[j] = tau * o.w[j] + (1.0 - tau) * t.w[j];
        for (std::size_t j = 0; j < t.b.size(); ++j)
            t.b[j] = tau * o.b[j] + (1.0 - tau) * t.b[j];
    }
}

void flatten(const Mlp& net, std::vector<double>& out) {
    out.clear();
    out.reserve(net.param_count());
    for (const Layer& l : net.layers) {
        out.insert(out.end(), l.w.begin(), l.w.end());
        out.insert(out.end(), l.b.begin(), l.b.end());
    }
}

void unflatten(const std::vector<double>& flat, Mlp& net) {
    if (flat.size() != net.param_count())
        throw std::invalid_argument("unflatten size mismatch");
    std::size_t idx = 0;
    for (Layer& l : net.layers) {
        for (double& x : l.w) x = flat[idx++];
        for (double& x : l.b) x = flat[idx++];
    }
}

std::string double_to_hex(double x) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(x)));
    return buf;
}

double hex_to_double(const std::string& s) {
    if (s.size() != 16) throw std::invalid_argument("bad hex double: " + s);
    std::uint64_t u = 0;
    for (char c : s) {
        u <<= 4;
        if (c >= '0' && c <= '9') u |= static_cast<std::uint64_t>(c - '0');
        else if (c >= 'a' && c <= 'f') u |= static_cast<std::uint64_t>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') u |= static_cast<std::uint64_t>(c - 'A' + 10);
        else throw std::invalid_argument("bad hex double: " + s);
    }
    return std::bit_cast<double>(u);
}

void write_mlp(std::ostream& os, const Mlp& net) {
    std::vector<int> d = net.dims();
    os << "mlp " << d.size() << ' ' << static_cast<int>(net.hidden) << ' '
       << static_cast<int>(net.output) << '\n';
    for (std::size_t i = 0; i < d.size(); ++i) os << (i ? " " : "") << d[i];
    os << '\n';
    for (const Layer& l : net.layers) {
        for (std::size_t j = 0; j < l.w.size(); ++j)
            os << (j ? " " : "") << double_to_hex(l.w[j]);
        os << '\n';
        for (std::size_t j = 0; j < l.b.size(); ++j)
            os << (j ? " " : "") << double_to_hex(l.b[j]);
        os << '\n';
    }
}

Mlp read_mlp(std::istream& is) {
    std::string tag;
    std::size_t ndims = 0;
    int hidden = 0, output = 0;
    if (!(is >> tag >> ndims >> hidden >> output) || tag != "mlp")
        throw std::runtime_error("bad mlp header");
    if (ndims < 2 || ndims > 64) throw std::runtime_error("bad mlp dims count");
    if (hidden < 0 || hidden > 2 || output < 0 || output > 2)
        throw std::runtime_error("bad mlp activation code");
    std::vector<int> d(ndims);
    for (int& x : d) {
        if (!(is >> x) || x <= 0) throw std::runtime_error("bad mlp dim");
    }
    Mlp net;
    net.hidden = static_cast<Activation>(hidden);
    net.output = static_cast<Activation>(output);
    std::string hex;
    for (std::size_t k = 0; k + 1 < d.size(); ++k) {
        Layer l;
        l.in = d[k];
        l.out = d[k + 1];
        l.w.resize(static_cast<std::size_t>(l.in) * l.out);
        l.b.resize(l.out);
        for (double& x : l.w) {
            if (!(is >> hex)) throw std::runtime_error("truncated mlp weights");
            x = hex_to_double(hex);
        }
        for (double& x : l.b) {
            if (!(is >> hex)) throw std::runtime_error("truncated mlp weights");
            x = hex_to_double(hex);
        }
        net.layers.push_back(std::move(l));
    }
    return net;
}

}  // namespace megc
