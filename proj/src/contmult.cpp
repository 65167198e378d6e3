#include "latticeprop/contmult.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "latticeprop/error.hpp"
#include "latticeprop/pathspace.hpp"

namespace latticeprop {

namespace {

constexpr int kCountBits = 10;

void require_positive(const std::vector<double>& x, std::size_t min_letters) {
    if (x.size() < min_letters) throw Error(ErrorCode::InvalidArgument, "too few arguments");
    for (double v : x)
        if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "arguments must be finite and >= 0");
}

bool has_zero(const std::vector<double>& x) {
    return std::any_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

// log( x^(k-1) / (k-1)! )
long double log_simplex(double x, std::int64_t k) {
    if (k == 1) return 0.0L;
    return static_cast<long double>(k - 1) * std::log(static_cast<long double>(x)) - std::lgamma(static_cast<long double>(k));
}

long double log_binomial(std::int64_t n, std::int64_t k) {
    return std::lgamma(static_cast<long double>(n + 1)) - std::lgamma(static_cast<long double>(k + 1)) -
           std::lgamma(static_cast<long double>(n - k + 1));
}

// Visits every k with k_i >= 1 and sum k_i = total.
template <typename F>
void for_each_composition(int l, std::int64_t total, F&& f) {
    std::vector<std::int64_t> k(static_cast<std::size_t>(l), 1);
    auto rec = [&](auto&& self, int i, std::int64_t left) -> void {
        if (i == l - 1) {
            k[static_cast<std::size_t>(i)] = left;
            f(k);
            return;
        }
        for (std::int64_t v = 1; v <= left - (l - 1 - i); ++v) {
            k[static_cast<std::size_t>(i)] = v;
            self(self, i + 1, left - v);
        }
    };
    if (total >= l) rec(rec, 0, total);
}

double log_bessel_i1(double z) {
    if (z < 600.0) return std::log(boost::math::cyl_bessel_i(1, z));
    const double mu = 4.0;
    const double series = 1.0 - (mu - 1.0) / (8.0 * z) + (mu - 1.0) * (mu - 9.0) / (2.0 * 64.0 * z * z);
    return z - 0.5 * std::log(2.0 * M_PI * z) + std::log(series);
}

bool is_basis(const Eigen::MatrixXd& dirs, int l) {
    if (dirs.size() == 0) return true;
    return dirs.rows() == l && dirs.cols() == l && dirs.isApprox(Eigen::MatrixXd::Identity(l, l), 0.0);
}

}  // namespace

std::vector<std::int64_t> SmirnovWord::letter_counts(int l) const {
    std::vector<std::int64_t> k(static_cast<std::size_t>(l), 0);
    for (int c : letters) ++k[static_cast<std::size_t>(c - 1)];
    return k;
}

void for_each_smirnov_word(int n, int l, const std::function<void(const SmirnovWord&)>& f) {
    if (n < 1 || l < 2) throw Error(ErrorCode::InvalidArgument, "smirnov_words needs n >= 1, l >= 2");
    SmirnovWord w;
    w.letters.resize(static_cast<std::size_t>(n));
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            f(w);
            return;
        }
        for (int c = 1; c <= l; ++c) {
            if (i > 0 && w.letters[static_cast<std::size_t>(i - 1)] == c) continue;
            w.letters[static_cast<std::size_t>(i)] = c;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
}

std::vector<SmirnovWord> smirnov_words(int n, int l) {
    std::vector<SmirnovWord> out;
    for_each_smirnov_word(n, l, [&](const SmirnovWord& w) { out.push_back(w); });
    return out;
}

SmirnovCounter::SmirnovCounter(int l) : l_(l) {
    if (l < 2 || l * kCountBits + 4 > 64) throw Error(ErrorCode::InvalidArgument, "SmirnovCounter supports 2 <= l <= 6");
}

long double SmirnovCounter::operator()(const std::vector<std::int64_t>& counts) {
    if (static_cast<int>(counts.size()) != l_) throw Error(ErrorCode::DimensionMismatch, "letter count size != l");
    for (auto c : counts)
        if (c < 0 || c >= (1 << kCountBits)) throw Error(ErrorCode::InvalidArgument, "letter count out of range");
    if (l_ == 2) {
        const auto diff = counts[0] - counts[1];
        if (counts[0] + counts[1] == 0) return 1.0L;
        return diff == 0 ? 2.0L : (diff == 1 || diff == -1) ? 1.0L : 0.0L;
    }
    auto k = counts;
    return rec(k, l_);
}

long double SmirnovCounter::rec(std::vector<std::int64_t>& k, int last) {
    std::uint64_t key = static_cast<std::uint64_t>(last);
    std::int64_t total = 0;
    for (int i = 0; i < l_; ++i) {
        key = (key << kCountBits) | static_cast<std::uint64_t>(k[static_cast<std::size_t>(i)]);
        total += k[static_cast<std::size_t>(i)];
    }
    if (total == 0) return 1.0L;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    long double s = 0.0L;
    for (int i = 0; i < l_; ++i) {
        auto& ki = k[static_cast<std::size_t>(i)];
        if (i == last || ki == 0) continue;
        --ki;
        s += rec(k, i);
        ++ki;
    }
    memo_.emplace(key, s);
    return s;
}

BigInt SmirnovCounter::exact(const std::vector<std::int64_t>& counts) {
    if (static_cast<int>(counts.size()) != l_) throw Error(ErrorCode::DimensionMismatch, "letter count size != l");
    auto k = counts;
    return rec_exact(k, l_);
}

BigInt SmirnovCounter::rec_exact(std::vector<std::int64_t>& k, int last) {
    if (std::all_of(k.begin(), k.end(), [](std::int64_t v) { return v == 0; })) return 1;
    auto key = k;
    key.push_back(last);
    if (auto it = exact_memo_.find(key); it != exact_memo_.end()) return it->second;
    BigInt s = 0;
    for (int i = 0; i < l_; ++i) {
        auto& ki = k[static_cast<std::size_t>(i)];
        if (i == last || ki == 0) continue;
        --ki;
        s += rec_exact(k, i);
        ++ki;
    }
    exact_memo_.emplace(std::move(key), s);
    return s;
}

VolumeEstimate path_polytope_volume(const Eigen::VectorXd& q, const SmirnovWord& c, const Eigen::MatrixXd& directions,
                                    const MonteCarloOptions& mc) {
    const int l = directions.size() == 0 ? static_cast<int>(q.size()) : static_cast<int>(directions.cols());
    for (int letter : c.letters)
        if (letter < 1 || letter > l) throw Error(ErrorCode::InvalidArgument, "letter outside the alphabet");
    for (std::size_t i = 1; i < c.letters.size(); ++i)
        if (c.letters[i] == c.letters[i - 1]) throw Error(ErrorCode::InvalidArgument, "word has repeated adjacent letters");
    const Eigen::MatrixXd dirs = directions.size() == 0 ? Eigen::MatrixXd::Identity(l, l) : directions;
    if (dirs.rows() != q.size()) throw Error(ErrorCode::DimensionMismatch, "direction dimension != target dimension");

    if (is_basis(dirs, l) && !mc.force_sampling) {
        const auto k = c.letter_counts(l);
        long double logv = 0.0L;
        for (int i = 0; i < l; ++i) {
            const double qi = q(i);
            const auto ki = k[static_cast<std::size_t>(i)];
            if (qi < 0.0 || (ki == 0 && qi != 0.0)) throw Error(ErrorCode::InfeasibleWord, "target outside the word's cone");
            if (ki == 0) continue;
            if (qi == 0.0) {
                if (ki > 1) return {0.0, 0.0};
                continue;
            }
            logv += log_simplex(qi, ki);
        }
        return {static_cast<double>(std::exp(logv)), 0.0};
    }

    const int n = static_cast<int>(c.letters.size());
    const int D = static_cast<int>(q.size());
    Eigen::MatrixXd E(D, n);
    for (int j = 0; j < n; ++j) E.col(j) = dirs.col(c.letters[static_cast<std::size_t>(j)] - 1);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(E);
    if (lu.rank() < D) {
        if (lu.rank() == n) throw Error(ErrorCode::InfeasibleWord, "word directions do not span the target space");
        throw Error(ErrorCode::InvalidArgument, "word directions do not span the target space");
    }
    std::vector<int> piv, fre;
    const auto perm = lu.permutationQ().indices();
    for (int j = 0; j < n; ++j) (j < D ? piv : fre).push_back(perm(j));
    Eigen::MatrixXd EP(D, D), EF(D, static_cast<int>(fre.size()));
    for (int j = 0; j < D; ++j) EP.col(j) = E.col(piv[static_cast<std::size_t>(j)]);
    for (std::size_t j = 0; j < fre.size(); ++j) EF.col(static_cast<int>(j)) = E.col(fre[j]);
    const Eigen::PartialPivLU<Eigen::MatrixXd> solver(EP);
    const double jac = 1.0 / std::abs(EP.determinant());

    if (fre.empty()) {
        const Eigen::VectorXd lam = solver.solve(q);
        if ((lam.array() < -1e-12).any()) throw Error(ErrorCode::InfeasibleWord, "target outside the word's cone");
        return {jac, 0.0};
    }

    // A functional positive on every direction bounds each lambda_j.
    std::vector<Eigen::VectorXd> trials;
    trials.push_back(Eigen::VectorXd::Ones(D));
    trials.push_back(q);
    for (int i = 0; i < D; ++i) trials.push_back(Eigen::VectorXd::Unit(D, i));
    Eigen::VectorXd w;
    double best = 0.0;
    for (const auto& cand : trials) {
        const double m = (cand.transpose() * E).minCoeff() / (cand.norm() + 1e-300);
        if (m > best) {
            best = m;
            w = cand;
        }
    }
    if (best <= 0.0) throw Error(ErrorCode::InvalidArgument, "directions are not contained in an open half-space");
    const double wq = w.dot(q);
    if (wq < 0.0) throw Error(ErrorCode::InfeasibleWord, "target outside the word's cone");

    Eigen::VectorXd hi(static_cast<int>(fre.size()));
    double box = 1.0;
    for (std::size_t j = 0; j < fre.size(); ++j) {
        hi(static_cast<int>(j)) = wq / w.dot(E.col(fre[j]));
        box *= hi(static_cast<int>(j));
    }
    std::mt19937_64 rng(mc.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::size_t hit = 0;
    Eigen::VectorXd lf(static_cast<int>(fre.size()));
    for (std::size_t s = 0; s < mc.samples; ++s) {
        for (int j = 0; j < lf.size(); ++j) lf(j) = hi(j) * unif(rng);
        const Eigen::VectorXd lp = solver.solve(q - EF * lf);
        if ((lp.array() >= 0.0).all()) ++hit;
    }
    const double N = static_cast<double>(mc.samples);
    const double p = static_cast<double>(hit) / N;
    return {box * jac * p, box * jac * std::sqrt(p * (1.0 - p) / N)};
}

double continuous_binomial(double x1, double x2) {
    if (x1 < 0.0 || x2 < 0.0) throw Error(ErrorCode::InvalidArgument, "arguments must be >= 0");
    if (x1 == 0.0 || x2 == 0.0) return 0.0;
    const double s = std::sqrt(x1 * x2);
    return 2.0 * boost::math::cyl_bessel_i(0, 2.0 * s) + (x1 + x2) / s * boost::math::cyl_bessel_i(1, 2.0 * s);
}

double continuous_multinomial_integral(const std::vector<double>& x) {
    require_positive(x, 2);
    if (has_zero(x)) return 0.0;
    const double sx = std::accumulate(x.begin(), x.end(), 0.0);
    double root = 0.0;
    for (double v : x) root += std::sqrt(v);
    const double peak = root * root;
    auto logf = [&](double u) {
        double s = -u;
        for (double v : x) s += 0.5 * std::log(u / v) + log_bessel_i1(2.0 * std::sqrt(u * v));
        return s;
    };
    // Rescale by the integrand at its approximate maximum.
    const double ref = logf(std::max(peak, 1e-3));
    auto f = [&](double u) { return u <= 0.0 ? 0.0 : std::exp(logf(u) - ref); };
    double err = 0.0;
    const double split = 4.0 * peak + 50.0;
    const double a = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, split, 15, 1e-13, &err);
    const double b = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, split, std::numeric_limits<double>::infinity(), 15, 1e-13, &err);
    return std::exp(ref - sx) * (a + b);
}

ContMultResult continuous_multinomial(const ContMultArgs& args, const TruncationPolicy& pol, const MonteCarloOptions& mc) {
    require_positive(args.x, 2);
    if (!(pol.tail_epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "tail_epsilon must be positive");
    const int l = static_cast<int>(args.x.size());
    ContMultResult res;
    if (has_zero(args.x)) return res;
    const double sx = std::accumulate(args.x.begin(), args.x.end(), 0.0);

    if (is_basis(args.directions, l)) {
        if (l > 4) {
            res.value = continuous_multinomial_integral(args.x);
            res.method = ContMultMethod::BesselIntegral;
            return res;
        }
        SmirnovCounter count(l);
        long double acc = 0.0L;
        for (int N = l; N <= pol.max_word_length; ++N) {
            long double cN = 0.0L;
            for_each_composition(l, N, [&](const std::vector<std::int64_t>& k) {
                const long double s = count(k);
                if (s == 0.0L) return;
                long double lt = std::log(s);
                for (int i = 0; i < l; ++i) lt += log_simplex(args.x[static_cast<std::size_t>(i)], k[static_cast<std::size_t>(i)]);
                cN += std::exp(lt);
            });
            acc += cN;
            res.word_length_reached = N;
            res.last_contribution = static_cast<double>(cN);
            if (N >= sx + l && cN < pol.tail_epsilon * acc) {
                res.value = static_cast<double>(acc);
                return res;
            }
        }
        throw Error(ErrorCode::TruncationNotReached, "max_word_length reached before the tail tolerance");
    }

    const Eigen::VectorXd q = Eigen::Map<const Eigen::VectorXd>(args.x.data(), l);
    if (args.directions.rows() != l) throw Error(ErrorCode::DimensionMismatch, "directions must be l x l");
    res.method = ContMultMethod::MonteCarlo;
    double acc = 0.0, var = 0.0;
    std::uint64_t word_seed = mc.seed;
    for (int N = l; N <= pol.max_word_length; ++N) {
        double cN = 0.0;
        for_each_smirnov_word(N, l, [&](const SmirnovWord& w) {
            MonteCarloOptions o = mc;
            o.seed = word_seed++;
            try {
                const auto v = path_polytope_volume(q, w, args.directions, o);
                cN += v.value;
                var += v.std_error * v.std_error;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::InfeasibleWord) throw;
            }
        });
        acc += cN;
        res.word_length_reached = N;
        res.last_contribution = cN;
        if (N > l && cN < pol.tail_epsilon * acc) {
            res.value = acc;
            res.std_error = std::sqrt(var);
            return res;
        }
    }
    throw Error(ErrorCode::TruncationNotReached, "max_word_length reached before the tail tolerance");
}

double continuous_multinomial(const std::vector<double>& x, const TruncationPolicy& pol) {
    return continuous_multinomial(ContMultArgs{x, {}}, pol).value;
}

double discrete_multinomial_log_asymptotic(const std::vector<std::int64_t>& x) {
    if (x.empty()) throw Error(ErrorCode::InvalidArgument, "empty argument list");
    const double l = static_cast<double>(x.size());
    double s = 0.0;
    for (auto v : x) s += static_cast<double>(v);
    const double mean = s / l;
    double dev = 0.0;
    for (auto v : x) dev += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);
    return (s + l / 2.0) * std::log(l) - (l - 1.0) * 0.5 * std::log(2.0 * M_PI * s) - l / (2.0 * s) * dev;
}

double discrete_multinomial_asymptotic(const std::vector<std::int64_t>& x) {
    return std::exp(discrete_multinomial_log_asymptotic(x));
}

std::complex<double> t_cont_apply(const GroupedTerms& grouped, double m, int d) {
    if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale m must be positive");
    std::complex<double> s = 0.0;
    for (const auto& [n, terms] : grouped) {
        if (n < d) continue;
        const double w = std::pow(m, static_cast<double>(d - n));
        for (const auto& [r, theta] : terms) s += r * w * std::polar(1.0, theta / m);
    }
    return s;
}

double disctocont_value(const std::vector<double>& x, double m) {
    require_positive(x, 2);
    if (!(m >= 1.0)) throw Error(ErrorCode::InvalidArgument, "refinement m must be >= 1");
    const int l = static_cast<int>(x.size());
    std::vector<std::int64_t> K(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) K[i] = std::llround(m * x[i]);
    if (std::any_of(K.begin(), K.end(), [](std::int64_t k) { return k < 1; })) return 0.0;
    SmirnovCounter count(l);
    const long double logm = std::log(static_cast<long double>(m));
    long double sum = 0.0L;
    std::vector<std::int64_t> k(x.size(), 1);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == l) {
            const long double s = count(k);
            if (s == 0.0L) return;
            long double lt = std::log(s);
            for (int j = 0; j < l; ++j) {
                const auto kj = k[static_cast<std::size_t>(j)];
                lt += log_binomial(K[static_cast<std::size_t>(j)] - 1, kj - 1) - static_cast<long double>(kj - 1) * logm;
            }
            sum += std::exp(lt);
            return;
        }
        for (std::int64_t v = 1; v <= K[static_cast<std::size_t>(i)]; ++v) {
            k[static_cast<std::size_t>(i)] = v;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return static_cast<double>(sum);
}

DiscToContResult disctocont_ratio(const std::vector<double>& x, double m) {
    require_positive(x, 2);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    auto ratio_at = [&](double mm) {
        const double bal = std::floor(mm * mean) / mm;
        return disctocont_value(x, mm) / disctocont_value(std::vector<double>(x.size(), bal), mm);
    };
    DiscToContResult r;
    r.ratio = ratio_at(m);
    r.ratio_half = ratio_at(std::max(1.0, m / 2.0));
    r.diagnostic = std::abs(r.ratio - r.ratio_half);
    return r;
}

ConvolutionCheck convolution_identity_check(const std::vector<double>& x, const QuadratureSpec& grid) {
    if (x.size() < 3) throw Error(ErrorCode::InvalidArgument, "the convolution identity needs l >= 3");
    require_positive(x, 3);
    if (!(grid.mollifier_width > 0.0)) throw Error(ErrorCode::InvalidArgument, "mollifier width must be positive");
    const std::size_t n = x.size();
    ConvolutionCheck out;
    TruncationPolicy pol;
    pol.max_word_length = 400;
    out.lhs = continuous_multinomial(x, pol);

    const double top = x[n - 2] + x[n - 1];
    const double inner = continuous_multinomial({x[n - 2], x[n - 1]}, pol);
    std::vector<double> head(x.begin(), x.end() - 2);
    head.push_back(0.0);
    const double eps = grid.mollifier_width;
    auto f = [&](double I) {
        if (I <= 0.0) return 0.0;
        head.back() = I;
        const double z = (I - top) / eps;
        return continuous_multinomial(head, pol) * inner * std::exp(-0.5 * z * z) / (eps * std::sqrt(2.0 * M_PI));
    };
    double err = 0.0;
    out.rhs = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, std::max(0.0, top - 8.0 * eps), top + 8.0 * eps,
                                                                            10, grid.tolerance, &err);
    if (!std::isfinite(out.rhs) || err > 1e-3 * std::abs(out.rhs) + 1e-300)
        throw Error(ErrorCode::QuadratureFailure, "mollified delta integral did not converge");
    out.relative_error = std::abs(out.rhs - out.lhs) / std::abs(out.lhs);
    return out;
}

}  // namespace latticeprop
