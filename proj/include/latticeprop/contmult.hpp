#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "latticeprop/types.hpp"

namespace latticeprop {

struct SmirnovWord {
    std::vector<int> letters;  // 1-based, no two adjacent letters equal

    std::vector<std::int64_t> letter_counts(int l) const;
};

// All l (l-1)^(n-1) Smirnov words of length n in lexicographic order.
std::vector<SmirnovWord> smirnov_words(int n, int l);
void for_each_smirnov_word(int n, int l, const std::function<void(const SmirnovWord&)>& f);

// Number of Smirnov words with the given letter counts.
class SmirnovCounter {
public:
    explicit SmirnovCounter(int l);
    long double operator()(const std::vector<std::int64_t>& counts);
    BigInt exact(const std::vector<std::int64_t>& counts);

private:
    long double rec(std::vector<std::int64_t>& k, int last);
    BigInt rec_exact(std::vector<std::int64_t>& k, int last);
    int l_;
    std::unordered_map<std::uint64_t, long double> memo_;
    std::map<std::vector<std::int64_t>, BigInt> exact_memo_;
};

struct ContMultArgs {
    std::vector<double> x;
    // Columns are letter directions. Empty means the standard basis.
    Eigen::MatrixXd directions;
};

struct TruncationPolicy {
    double tail_epsilon = 1e-10;
    int max_word_length = 60;
};

struct MonteCarloOptions {
    std::size_t samples = 20000;
    std::uint64_t seed = 1;
    bool force_sampling = false;
};

struct VolumeEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

// Volume of {lambda >= 0 : sum_k lambda_k e_{c_k} = q} under the measure
// delta(E lambda - q) d lambda. Basis directions use the closed product form,
// anything else is sampled.
VolumeEstimate path_polytope_volume(const Eigen::VectorXd& q, const SmirnovWord& c, const Eigen::MatrixXd& directions,
                                    const MonteCarloOptions& mc = {});

enum class ContMultMethod { WordSeries, BesselIntegral, MonteCarlo };

struct ContMultResult {
    double value = 0.0;
    double std_error = 0.0;
    int word_length_reached = 0;
    double last_contribution = 0.0;
    ContMultMethod method = ContMultMethod::WordSeries;
};

// Word-length series for up to four letters; the exact Bessel-integral form
//   e^{-sum x} int_0^inf e^{-u} prod_i sqrt(u/x_i) I_1(2 sqrt(u x_i)) du
// above that. General directions are summed word by word with sampled volumes.
ContMultResult continuous_multinomial(const ContMultArgs& args, const TruncationPolicy& pol = {},
                                      const MonteCarloOptions& mc = {});
double continuous_multinomial(const std::vector<double>& x, const TruncationPolicy& pol = {});
double continuous_multinomial_integral(const std::vector<double>& x);

// The closed form for two letters: 2 I_0(2s) + ((x1 + x2)/s) I_1(2s), s = sqrt(x1 x2).
double continuous_binomial(double x1, double x2);

double discrete_multinomial_asymptotic(const std::vector<std::int64_t>& x);
double discrete_multinomial_log_asymptotic(const std::vector<std::int64_t>& x);

using GroupedTerms = std::map<int, std::vector<std::pair<double, double>>>;
std::complex<double> t_cont_apply(const GroupedTerms& grouped, double m, int d);

struct DiscToContResult {
    double ratio = 0.0;       // at refinement m
    double ratio_half = 0.0;  // at refinement m / 2
    double diagnostic = 0.0;  // |ratio - ratio_half|
};

// T_cont-weighted discrete multinomial at [m x_i] over the balanced one.
double disctocont_value(const std::vector<double>& x, double m);
DiscToContResult disctocont_ratio(const std::vector<double>& x, double m);

struct QuadratureSpec {
    double mollifier_width = 1e-2;
    double tolerance = 1e-9;
};

struct ConvolutionCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double relative_error = 0.0;
};

// {sum x | x_1..x_n} against int {sum x | x_1..x_{n-2}, I} {I | x_{n-1}, x_n} dI,
// where the binomial with top I is supported at I = x_{n-1} + x_n and is
// realized as a Gaussian of width mollifier_width.
ConvolutionCheck convolution_identity_check(const std::vector<double>& x, const QuadratureSpec& grid = {});

}  // namespace latticeprop
