#include "network.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "csvutil.hpp"
#include "rng.hpp"

namespace holterisk {

std::size_t subnet_param_count(const SubnetShape& s) {
    if (s.n_hidden == 0) return static_cast<std::size_t>(s.n_inputs) + 1;
    const auto h = static_cast<std::size_t>(s.n_hidden);
    const auto in = static_cast<std::size_t>(s.n_inputs);
    return h * (in + 1) + h + 1;
}

int NetworkSpec::n_inputs() const {
    if (kind == Kind::Conventional) return net.n_inputs;
    int n = 0;
    for (const auto& h : hubs) n += h.shape.n_inputs;
    return n;
}

std::size_t NetworkSpec::n_params() const {
    if (kind == Kind::Conventional) return subnet_param_count(net);
    std::size_t n = 0;
    for (const auto& h : hubs) n += subnet_param_count(h.shape);
    return n + hubs.size() + 1; // output neuron
}

NetworkSpec conventional_spec(int n_inputs, int n_hidden) {
    if (n_inputs < 1) throw ConfigError("conventional network needs at least 1 input");
    if (n_hidden < 0) throw ConfigError("hidden count must be >= 0");
    NetworkSpec s;
    s.kind = NetworkSpec::Kind::Conventional;
    s.net = SubnetShape{n_inputs, n_hidden};
    return s;
}

NetworkSpec adhoc_spec(std::vector<HubBlock> hubs) {
    if (hubs.empty() || hubs.size() > 3) throw ConfigError("ad hoc network needs 1..3 hub blocks");
    for (const auto& h : hubs) {
        if (h.shape.n_inputs < 1) throw ConfigError("hub block " + h.name + " needs at least 1 input");
        if (h.shape.n_hidden < 0) throw ConfigError("hidden count must be >= 0");
        if (h.name.empty() || h.name.find(' ') != std::string::npos)
            throw ConfigError("hub block name must be a single token");
    }
    NetworkSpec s;
    s.kind = NetworkSpec::Kind::AdHoc;
    s.hubs = std::move(hubs);
    return s;
}

std::vector<std::uint8_t> bias_mask(const NetworkSpec& spec) {
    std::vector<std::uint8_t> mask;
    mask.reserve(spec.n_params());
    auto push_subnet = [&](const SubnetShape& s) {
        if (s.n_hidden == 0) {
            mask.insert(mask.end(), static_cast<std::size_t>(s.n_inputs), 0);
            mask.push_back(1);
            return;
        }
        for (int j = 0; j < s.n_hidden; ++j)
            mask.insert(mask.end(), static_cast<std::size_t>(s.n_inputs), 0);
        mask.insert(mask.end(), static_cast<std::size_t>(s.n_hidden), 1); // b1
        mask.insert(mask.end(), static_cast<std::size_t>(s.n_hidden), 0); // w2
        mask.push_back(1);                                                // b2
    };
    if (spec.kind == NetworkSpec::Kind::Conventional) {
        push_subnet(spec.net);
    } else {
        for (const auto& h : spec.hubs) push_subnet(h.shape);
        mask.insert(mask.end(), spec.hubs.size(), 0); // w_out
        mask.push_back(1);                            // b_out
    }
    return mask;
}

double sigmoid(double u) {
    // |u| capped so the output is strictly inside (0, 1) in double
    // precision for any finite preactivation.
    if (u > 36.0) u = 36.0;
    if (u < -36.0) u = -36.0;
    if (u >= 0.0) {
        const double e = std::exp(-u);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(u);
    return e / (1.0 + e);
}

Network init_network(const NetworkSpec& spec, double scale, std::uint64_t seed) {
    Network net;
    net.spec = spec;
    net.params.resize(spec.n_params());
    Rng rng(seed);
    for (auto& p : net.params) p = rng.uniform(-scale, scale);
    return net;
}

namespace {

// Forward through one subnet block; optionally records the hidden
// activations for backprop.
double subnet_forward(const SubnetShape& s, const double* p, const double* x, double* hidden) {
    const auto in = static_cast<std::size_t>(s.n_inputs);
    if (s.n_hidden == 0) {
        double u = p[in]; // bias
        for (std::size_t i = 0; i < in; ++i) u += p[i] * x[i];
        return sigmoid(u);
    }
    const auto h = static_cast<std::size_t>(s.n_hidden);
    const double* w1 = p;
    const double* b1 = p + h * in;
    const double* w2 = b1 + h;
    const double b2 = w2[h];
    double u2 = b2;
    for (std::size_t j = 0; j < h; ++j) {
        double u = b1[j];
        const double* wj = w1 + j * in;
        for (std::size_t i = 0; i < in; ++i) u += wj[i] * x[i];
        const double a = sigmoid(u);
        if (hidden) hidden[j] = a;
        u2 += w2[j] * a;
    }
    return sigmoid(u2);
}

// Accumulates d(cost)/d(subnet params) into gp given the upstream
// derivative d(cost)/d(subnet output).
void subnet_backward(const SubnetShape& s, const double* p, const double* x, const double* hidden,
                     double out, double dout, double* gp) {
    const auto in = static_cast<std::size_t>(s.n_inputs);
    const double dpre_out = dout * out * (1.0 - out);
    if (s.n_hidden == 0) {
        for (std::size_t i = 0; i < in; ++i) gp[i] += dpre_out * x[i];
        gp[in] += dpre_out;
        return;
    }
    const auto h = static_cast<std::size_t>(s.n_hidden);
    const double* w2 = p + h * in + h;
    double* gw1 = gp;
    double* gb1 = gp + h * in;
    double* gw2 = gb1 + h;
    double* gb2 = gw2 + h;
    *gb2 += dpre_out;
    for (std::size_t j = 0; j < h; ++j) {
        const double a = hidden[j];
        gw2[j] += dpre_out * a;
        const double dpre_j = dpre_out * w2[j] * a * (1.0 - a);
        gb1[j] += dpre_j;
        double* gw1j = gw1 + j * in;
        for (std::size_t i = 0; i < in; ++i) gw1j[i] += dpre_j * x[i];
    }
}

struct AdhocCache {
    std::vector<double> hidden;  // all hubs' hidden activations, packed
    std::vector<double> z;       // subnet outputs
};

double adhoc_forward(const NetworkSpec& spec, const double* p, const double* x, AdhocCache* cache) {
    const std::size_t k = spec.hubs.size();
    std::size_t poff = 0, xoff = 0, hoff = 0;
    double zbuf[3];
    for (std::size_t b = 0; b < k; ++b) {
        const auto& s = spec.hubs[b].shape;
        double* hidden = nullptr;
        if (cache) hidden = cache->hidden.data() + hoff;
        zbuf[b] = subnet_forward(s, p + poff, x + xoff, hidden);
        poff += subnet_param_count(s);
        xoff += static_cast<std::size_t>(s.n_inputs);
        hoff += static_cast<std::size_t>(s.n_hidden);
    }
    const double* wout = p + poff;
    double u = wout[k];
    for (std::size_t b = 0; b < k; ++b) u += wout[b] * zbuf[b];
    if (cache) cache->z.assign(zbuf, zbuf + k);
    return sigmoid(u);
}

std::size_t total_hidden(const NetworkSpec& spec) {
    std::size_t h = 0;
    for (const auto& hub : spec.hubs) h += static_cast<std::size_t>(hub.shape.n_hidden);
    return h;
}

} // namespace

double forward(const Network& net, std::span<const double> x) {
    if (static_cast<int>(x.size()) != net.spec.n_inputs())
        throw ConfigError("forward: input size " + std::to_string(x.size()) + " does not match network (" +
                          std::to_string(net.spec.n_inputs()) + ")");
    if (net.spec.kind == NetworkSpec::Kind::Conventional)
        return subnet_forward(net.spec.net, net.params.data(), x.data(), nullptr);
    return adhoc_forward(net.spec, net.params.data(), x.data(), nullptr);
}

std::vector<double> subnet_outputs(const Network& net, std::span<const double> x) {
    if (net.spec.kind != NetworkSpec::Kind::AdHoc)
        throw ConfigError("subnet_outputs: not an ad hoc network");
    if (static_cast<int>(x.size()) != net.spec.n_inputs())
        throw ConfigError("subnet_outputs: input size mismatch");
    AdhocCache cache;
    cache.hidden.resize(total_hidden(net.spec));
    adhoc_forward(net.spec, net.params.data(), x.data(), &cache);
    return cache.z;
}

long TrainingSet::total_replication() const {
    long t = 0;
    for (int r : rep) t += r;
    return t;
}

long TrainingSet::positives() const {
    long t = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i] == 1) t += rep[i];
    return t;
}

TrainingSet TrainingSet::from_matrix(const FeatureMatrix& m, const std::vector<std::string>& features) {
    TrainingSet ts;
    ts.n_features = features.size();
    std::vector<std::size_t> cols;
    for (const auto& f : features) {
        auto c = m.col_index(f);
        if (!c) throw ConfigError("TrainingSet: unknown feature: " + f);
        cols.push_back(*c);
    }
    ts.x.reserve(m.rows() * features.size());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (auto c : cols) {
            if (m.is_missing(r, c))
                throw InsufficientDataError("TrainingSet: missing value for " + m.feature_names[c]);
            ts.x.push_back(m.at(r, c));
        }
        ts.y.push_back(m.labels[r]);
        ts.rep.push_back(1);
    }
    return ts;
}

TrainingSet TrainingSet::subset_rows(const std::vector<std::size_t>& rows) const {
    TrainingSet out;
    out.n_features = n_features;
    for (auto r : rows) {
        const auto sp = row(r);
        out.x.insert(out.x.end(), sp.begin(), sp.end());
        out.y.push_back(y[r]);
        out.rep.push_back(rep[r]);
    }
    return out;
}

TrainingSet TrainingSet::subset_columns(const std::vector<std::size_t>& cols) const {
    TrainingSet out;
    out.n_features = cols.size();
    out.y = y;
    out.rep = rep;
    out.x.reserve(n_rows() * cols.size());
    for (std::size_t r = 0; r < n_rows(); ++r) {
        const auto sp = row(r);
        for (auto c : cols) out.x.push_back(sp[c]);
    }
    return out;
}

double cost(const Network& net, const TrainingSet& data, double lambda) {
    double c = 0.0;
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        const double r = forward(net, data.row(i)) - static_cast<double>(data.y[i]);
        c += static_cast<double>(data.rep[i]) * r * r;
    }
    if (lambda > 0.0) {
        const auto mask = bias_mask(net.spec);
        double w2 = 0.0;
        for (std::size_t i = 0; i < net.params.size(); ++i)
            if (!mask[i]) w2 += net.params[i] * net.params[i];
        c += lambda * w2;
    }
    return c;
}

double cost_and_gradient(const Network& net, const TrainingSet& data, double lambda,
                         std::vector<double>& grad) {
    const std::size_t np = net.params.size();
    grad.assign(np, 0.0);
    double c = 0.0;
    const double* p = net.params.data();

    if (net.spec.kind == NetworkSpec::Kind::Conventional) {
        const auto& s = net.spec.net;
        std::vector<double> hidden(static_cast<std::size_t>(s.n_hidden));
        for (std::size_t i = 0; i < data.n_rows(); ++i) {
            const double* x = data.row(i).data();
            const double out = subnet_forward(s, p, x, hidden.data());
            const double r = out - static_cast<double>(data.y[i]);
            const double w = static_cast<double>(data.rep[i]);
            c += w * r * r;
            subnet_backward(s, p, x, hidden.data(), out, 2.0 * w * r, grad.data());
        }
    } else {
        const std::size_t k = net.spec.hubs.size();
        AdhocCache cache;
        cache.hidden.resize(total_hidden(net.spec));
        for (std::size_t i = 0; i < data.n_rows(); ++i) {
            const double* x = data.row(i).data();
            const double out = adhoc_forward(net.spec, p, x, &cache);
            const double r = out - static_cast<double>(data.y[i]);
            const double w = static_cast<double>(data.rep[i]);
            c += w * r * r;

            const double dout = 2.0 * w * r;
            const double dpre = dout * out * (1.0 - out);
            std::size_t poff = 0, xoff = 0, hoff = 0;
            // locate the output neuron block first
            std::size_t pout = 0;
            for (const auto& hub : net.spec.hubs) pout += subnet_param_count(hub.shape);
            const double* wout = p + pout;
            double* gout = grad.data() + pout;
            for (std::size_t b = 0; b < k; ++b) {
                gout[b] += dpre * cache.z[b];
                const auto& s = net.spec.hubs[b].shape;
                subnet_backward(s, p + poff, x + xoff, cache.hidden.data() + hoff, cache.z[b],
                                dpre * wout[b], grad.data() + poff);
                poff += subnet_param_count(s);
                xoff += static_cast<std::size_t>(s.n_inputs);
                hoff += static_cast<std::size_t>(s.n_hidden);
            }
            gout[k] += dpre;
        }
    }

    if (lambda > 0.0) {
        const auto mask = bias_mask(net.spec);
        double w2 = 0.0;
        for (std::size_t i = 0; i < np; ++i) {
            if (mask[i]) continue;
            w2 += net.params[i] * net.params[i];
            grad[i] += 2.0 * lambda * net.params[i];
        }
        c += lambda * w2;
    }
    return c;
}

std::vector<double> gradient(const Network& net, const TrainingSet& data, double lambda) {
    std::vector<double> g;
    cost_and_gradient(net, data, lambda, g);
    return g;
}

double mean_squared_error(const Network& net, const TrainingSet& data) {
    if (data.n_rows() == 0) throw InsufficientDataError("mean_squared_error: empty set");
    double c = 0.0;
    long n = 0;
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        const double r = forward(net, data.row(i)) - static_cast<double>(data.y[i]);
        c += static_cast<double>(data.rep[i]) * r * r;
        n += data.rep[i];
    }
    return c / static_cast<double>(n);
}

double classification_accuracy(const Network& net, const TrainingSet& data, double threshold) {
    if (data.n_rows() == 0) throw InsufficientDataError("classification_accuracy: empty set");
    long hit = 0, n = 0;
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        const int pred = forward(net, data.row(i)) >= threshold ? 1 : 0;
        if (pred == data.y[i]) hit += data.rep[i];
        n += data.rep[i];
    }
    return static_cast<double>(hit) / static_cast<double>(n);
}

std::string serialize_network(const Network& net) {
    std::ostringstream out;
    out << "holterisk network v1\n";
    if (net.spec.kind == NetworkSpec::Kind::Conventional) {
        out << "conventional " << net.spec.net.n_inputs << " " << net.spec.net.n_hidden << "\n";
    } else {
        out << "adhoc " << net.spec.hubs.size() << "\n";
        for (const auto& h : net.spec.hubs)
            out << "hub " << h.name << " " << h.shape.n_inputs << " " << h.shape.n_hidden << "\n";
    }
    out << "params " << net.params.size() << "\n";
    for (double p : net.params) out << format_double(p) << "\n";
    return out.str();
}

Network parse_network(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next_line = [&]() -> std::string {
        while (std::getline(in, line)) {
            const std::string t = trim(line);
            if (!t.empty()) return t;
        }
        throw FormatError("network file: unexpected end of file");
    };

    if (next_line() != "holterisk network v1") throw FormatError("network file: bad header");
    std::istringstream topo(next_line());
    std::string kind;
    topo >> kind;
    Network net;
    if (kind == "conventional") {
        int n_in = 0, n_hidden = 0;
        if (!(topo >> n_in >> n_hidden)) throw FormatError("network file: bad conventional topology");
        net.spec = conventional_spec(n_in, n_hidden);
    } else if (kind == "adhoc") {
        std::size_t k = 0;
        if (!(topo >> k) || k < 1 || k > 3) throw FormatError("network file: bad hub count");
        std::vector<HubBlock> hubs;
        for (std::size_t b = 0; b < k; ++b) {
            std::istringstream hl(next_line());
            std::string tag, name;
            int n_in = 0, n_hidden = 0;
            if (!(hl >> tag >> name >> n_in >> n_hidden) || tag != "hub")
                throw FormatError("network file: bad hub line");
            hubs.push_back(HubBlock{name, SubnetShape{n_in, n_hidden}});
        }
        net.spec = adhoc_spec(std::move(hubs));
    } else {
        throw FormatError("network file: unknown topology kind: " + kind);
    }

    std::istringstream ph(next_line());
    std::string tag;
    std::size_t count = 0;
    if (!(ph >> tag >> count) || tag != "params") throw FormatError("network file: bad params header");
    if (count != net.spec.n_params())
        throw FormatError("network file: parameter count does not match topology");
    net.params.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto v = parse_double(next_line());
        if (!v) throw FormatError("network file: bad parameter value");
        net.params.push_back(*v);
    }
    return net;
}

void save_network(const Network& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write network file: " + path);
    out << serialize_network(net);
    if (!out) throw FormatError("write failed: " + path);
}

Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open network file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_network(ss.str());
}

} // namespace holterisk
