#ifndef HOLTERISK_NETWORK_HPP
#define HOLTERISK_NETWORK_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "types.hpp"

namespace holterisk {

// One-hidden-layer sigmoid block with a scalar sigmoid output.
// n_hidden == 0 collapses to a single sigmoid neuron on the inputs.
struct SubnetShape {
    int n_inputs = 0;
    int n_hidden = 0;
    bool operator==(const SubnetShape&) const = default;
};

std::size_t subnet_param_count(const SubnetShape& s);

struct HubBlock {
    std::string name; // SUBSTRATE / ANS / TRIGGERS in practice
    SubnetShape shape;
    bool operator==(const HubBlock&) const = default;
};

// Either a single block on all inputs (conventional) or up to three
// disjoint hub blocks feeding one sigmoid output neuron (ad hoc).
struct NetworkSpec {
    enum class Kind { Conventional, AdHoc };
    Kind kind = Kind::Conventional;
    SubnetShape net;             // Kind::Conventional
    std::vector<HubBlock> hubs;  // Kind::AdHoc; inputs are the hub blocks concatenated in order

    int n_inputs() const;
    std::size_t n_params() const;
    bool operator==(const NetworkSpec&) const = default;
};

NetworkSpec conventional_spec(int n_inputs, int n_hidden);
NetworkSpec adhoc_spec(std::vector<HubBlock> hubs);

struct Network {
    NetworkSpec spec;
    std::vector<double> params;
};

// Parameter layout, fixed for serialization and the bias mask:
//   subnet, n_hidden == 0:  w[n_in], b
//   subnet, n_hidden  > 0:  W1 row-major [h][n_in], b1[h], w2[h], b2
//   ad hoc:                 subnet blocks in hub order, then w_out[k], b_out
std::vector<std::uint8_t> bias_mask(const NetworkSpec& spec);

double sigmoid(double u);

Network init_network(const NetworkSpec& spec, double scale, std::uint64_t seed);

// Probability estimate, strictly inside (0, 1).
double forward(const Network& net, std::span<const double> x);

// Outputs of the ad hoc hub subnetworks (composition checks, reports).
std::vector<double> subnet_outputs(const Network& net, std::span<const double> x);

struct TrainingSet {
    std::size_t n_features = 0;
    std::vector<double> x; // row-major
    std::vector<int> y;    // 0/1
    std::vector<int> rep;  // replication count, >= 1

    std::size_t n_rows() const { return y.size(); }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(x.data() + i * n_features, n_features);
    }
    long total_replication() const;
    long positives() const;

    static TrainingSet from_matrix(const FeatureMatrix& m, const std::vector<std::string>& features);
    TrainingSet subset_rows(const std::vector<std::size_t>& rows) const;
    TrainingSet subset_columns(const std::vector<std::size_t>& cols) const;
};

// Replication-weighted least squares with weight decay on the weights
// (biases excluded): sum_i rep_i (f(x_i) - y_i)^2 + lambda * |w|^2.
double cost(const Network& net, const TrainingSet& data, double lambda);

std::vector<double> gradient(const Network& net, const TrainingSet& data, double lambda);

// Single-pass cost + gradient for the optimizers.
double cost_and_gradient(const Network& net, const TrainingSet& data, double lambda,
                         std::vector<double>& grad);

// Replication-weighted mean of (f - y)^2; no decay term.
double mean_squared_error(const Network& net, const TrainingSet& data);

double classification_accuracy(const Network& net, const TrainingSet& data, double threshold);

// Versioned text format; parameters print with shortest round-trip
// precision so save/load is bit-exact.
std::string serialize_network(const Network& net);
Network parse_network(const std::string& text);
void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);

} // namespace holterisk

#endif
