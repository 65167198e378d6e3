#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "latticeprop/contmult.hpp"
#include "latticeprop/diagrams.hpp"
#include "latticeprop/error.hpp"
#include "latticeprop/manifold.hpp"
#include "latticeprop/mink_core.hpp"
#include "latticeprop/pathspace.hpp"
#include "latticeprop/propagator.hpp"
#include "latticeprop/spinor.hpp"
#include "latticeprop/verify.hpp"

using namespace latticeprop;
using json = nlohmann::ordered_json;
using cd = std::complex<double>;

namespace {

constexpr int kSchemaVersion = 1;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string("cannot parse ") + what + " '" + s + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string("empty ") + what);
    return out;
}

LatticeVec parse_event(const std::string& s, int d, const char* what) {
    const auto v = parse_list(s, what);
    if (static_cast<int>(v.size()) != d + 1)
        throw UsageError(std::string(what) + " needs " + std::to_string(d + 1) + " components");
    LatticeVec out(d + 1);
    for (int i = 0; i <= d; ++i) {
        if (v[i] != std::floor(v[i])) throw UsageError(std::string(what) + " must be integral");
        out(i) = static_cast<std::int64_t>(v[i]);
    }
    return out;
}

json cjson(cd z) { return json::array({z.real(), z.imag()}); }

std::string str(const BigInt& b) { return b.str(); }

std::string csv_vec(const LatticeVec& v, char sep = ' ') {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(v(i));
    return s;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write " + path);
    f.precision(17);
    return f;
}

json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read " + path);
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

std::uint64_t effective_seed(std::uint64_t configured) {
    if (const char* env = std::getenv("LATTICEPROP_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError("LATTICEPROP_SEED must be an unsigned integer");
        }
    }
    return configured;
}

void write_spectrum(const std::string& path, const std::map<std::int64_t, BigInt>& s) {
    auto f = open_out(path);
    f << "I,count\n";
    for (const auto& [I, c] : s) f << I << ',' << c << '\n';
}

json spectrum_json(const std::map<std::int64_t, BigInt>& s) {
    json out = json::array();
    for (const auto& [I, c] : s) out.push_back({{"I", I}, {"count", str(c)}});
    return out;
}

struct Global {
    bool json = false;
    std::uint64_t seed = 1;
    int threads = 0;
};

void emit(const Global& g, const std::string& command, json body, const std::string& text) {
    if (g.json) {
        json out{{"schema_version", kSchemaVersion}, {"command", command}};
        out.update(body);
        std::cout << out.dump(2) << '\n';
    } else {
        std::cout << text;
    }
}

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(12);
    o << v;
    return o.str();
}

std::string fmt(cd z) { return fmt(z.real()) + (z.imag() < 0 ? " - " : " + ") + fmt(std::abs(z.imag())) + "i"; }

// Mass scan CSV (m, Re K, Im K) shared by the propagator commands.
template <typename F>
void write_scan(const std::string& path, double mmax, int steps, F&& value) {
    auto f = open_out(path);
    f << "m,re,im\n";
    for (int k = 0; k <= steps; ++k) {
        const double m = mmax * k / steps;
        const auto K = value(m);
        f << m << ',' << K.real() << ',' << K.imag() << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice path-space propagators, orbit sums, fermion weights and diagram volumes"};
    app.require_subcommand(1);
    Global g;
    app.add_flag("--json", g.json, "Machine-readable JSON output");
    app.add_option("--seed", g.seed, "Random seed (LATTICEPROP_SEED overrides)");
    app.add_option("--threads", g.threads, "Worker threads (kernels run single-threaded)")->check(CLI::NonNegativeNumber);

    int dim = 1, bound = 1;
    auto add_dim_bound = [&](CLI::App* c) {
        c->add_option("--dim", dim, "Spatial dimension")->check(CLI::Range(1, 6));
        c->add_option("--bound", bound, "Hypotenuse bound n")->check(CLI::Range(1, 100000));
    };

    // tuples
    std::string csv_path;
    auto* tuples = app.add_subcommand("tuples", "List the axis set A_n");
    add_dim_bound(tuples);
    tuples->add_option("--csv", csv_path, "Write the axis table to a CSV file");

    // metric-ball
    double radius = 1.0;
    auto* ball = app.add_subcommand("metric-ball", "Vertices of the polygonal unit ball");
    add_dim_bound(ball);
    ball->add_option("--radius", radius, "Ball radius")->check(CLI::PositiveNumber);
    ball->add_option("--csv", csv_path, "Write vertices to a CSV file");

    // count-paths
    std::string target = "0,1", source, spectrum_path;
    std::int64_t length = -1;
    auto* count = app.add_subcommand("count-paths", "Count canonical lattice paths by length");
    add_dim_bound(count);
    count->add_option("--target", target, "Target event x1,...,t")->required();
    count->add_option("--length", length, "Report the count at this total length");
    count->add_option("--csv", csv_path, "Write the length spectrum (I,count)");

    // contmult
    std::string args_s, dirs_path;
    int max_word = 60;
    std::size_t samples = 20000;
    auto* contmult = app.add_subcommand("contmult", "Continuous multinomial coefficient");
    contmult->add_option("--args", args_s, "Arguments x1,x2,...")->required();
    contmult->add_option("--letters-dirs", dirs_path, "JSON list of letter direction vectors");
    contmult->add_option("--max-word", max_word, "Maximum Smirnov word length")->check(CLI::PositiveNumber);
    contmult->add_option("--samples", samples, "Monte Carlo samples per word");

    // propagator
    double mass = 1.0, mmax = 0.0;
    int steps = 100;
    std::string variant = "standard", scan_path;
    auto* prop = app.add_subcommand("propagator", "Discrete propagator from the length spectrum");
    auto add_prop = [&](CLI::App* c) {
        add_dim_bound(c);
        c->add_option("--mass", mass, "Mass m");
        c->add_option("--target", target, "Target event x1,...,t")->required();
        c->add_option("--source", source, "Source event (default origin)");
        c->add_option("--variant", variant, "standard or feynman")->check(CLI::IsMember({"standard", "feynman"}));
        c->add_option("--spectrum", spectrum_path, "Write the length spectrum (I,count)");
        c->add_option("--scan", scan_path, "Write (m, Re K, Im K) over [0, mmax]");
        c->add_option("--mmax", mmax, "Upper mass for --scan");
        c->add_option("--steps", steps, "Mass steps for --scan")->check(CLI::PositiveNumber);
    };
    add_prop(prop);

    // quotient-prop
    std::string circ_s;
    auto* qprop = app.add_subcommand("quotient-prop", "Propagator on a flat periodic quotient lattice");
    add_prop(qprop);
    qprop->add_option("--circumference", circ_s, "Circumference per spatial dimension")->required();

    // orbit
    std::string group = "cylinder3", base_s = "0,0";
    int max_word_orbit = 3;
    double t0 = 2.0;
    auto* orbit = app.add_subcommand("orbit", "Deck-transformation orbit on the hyperboloid");
    orbit->add_option("--group", group, "Built-in group")->check(CLI::IsMember({"cylinder3"}));
    orbit->add_option("--max-word", max_word_orbit, "Maximum word length")->check(CLI::Range(0, 12));
    orbit->add_option("--base", base_s, "Base point re,im in the Poincare disk");
    orbit->add_option("--t0", t0, "Time of the hyperboloid sheet");
    orbit->add_option("--csv", csv_path, "Write the orbit (t,x,y,tau,word)");
    bool orbit_sum = false;
    orbit->add_flag("--sum", orbit_sum, "Also evaluate the orbit-sum propagator at the origin event");
    orbit->add_option("--mass", mass, "Mass for --sum");

    // kl-spectrum
    std::string taus_path, norm = "n";
    double mmin = 0.0;
    int peaks = 0;
    auto* kl = app.add_subcommand("kl-spectrum", "Kallen-Lehmann spectral estimator from proper times");
    kl->add_option("--taus", taus_path, "CSV of proper times (a tau column or the first column)")->required();
    kl->add_option("--mmin", mmin, "Lower end of the mass grid");
    kl->add_option("--mmax", mmax, "Upper end of the mass grid")->required();
    kl->add_option("--steps", steps, "Number of grid intervals")->check(CLI::PositiveNumber);
    kl->add_option("--norm", norm, "n (1/N) or sqrt (1/sqrt N)")->check(CLI::IsMember({"n", "sqrt"}));
    kl->add_option("--peaks", peaks, "Report this many peaks");
    kl->add_option("--csv", csv_path, "Write (m,rho)");

    // fermion
    std::string spinors_path, hist_path;
    int bins = 20;
    auto* ferm = app.add_subcommand("fermion", "Rapidity-weighted fermion path sum");
    add_dim_bound(ferm);
    ferm->add_option("--mass", mass, "Mass m");
    ferm->add_option("--target", target, "Target event x1,...,t")->required();
    ferm->add_option("--spinors", spinors_path, "JSON {v: [...], w: [...]}, entries real or [re, im]");
    ferm->add_option("--variant", variant, "standard or feynman")->check(CLI::IsMember({"standard", "feynman"}));
    ferm->add_option("--histogram", hist_path, "Write a histogram of Re(total rapidity)");
    ferm->add_option("--bins", bins, "Histogram bins")->check(CLI::PositiveNumber);

    // diagram
    std::string spec_path, theory_path, grid_path, builtin, method = "both";
    auto* diag = app.add_subcommand("diagram", "Feynman-diagram contribution as a path-volume convolution");
    diag->add_option("--spec", spec_path, "Diagram JSON {externals, vertices, edges}");
    diag->add_option("--theory", theory_path, "Theory JSON {d, m, couplings: {degree: a}}");
    diag->add_option("--grid", grid_path, "Grid JSON {lo, hi, cells, length_step, mc_samples}");
    diag->add_option("--builtin", builtin, "Use a built-in test diagram (single-edge, tree-3pt, one-loop)");
    diag->add_option("--method", method, "pos, length or both")->check(CLI::IsMember({"pos", "length", "both"}));

    // teich-check
    std::int64_t circumference = 3;
    auto* teich = app.add_subcommand("teich-check", "Boundary-crossing decomposition on a periodic strip");
    teich->add_option("--circumference", circumference, "Strip width")->check(CLI::Range(2, 64));
    teich->add_option("--bound", bound, "Hypotenuse bound n");
    teich->add_option("--source", source, "Source event x,t (default 1,0)");
    teich->add_option("--target", target, "Target event x,t")->required();

    // verify
    bool quick = false;
    int criterion = 0;
    auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
    verify->add_flag("--quick", quick, "Only the exact oracle-equality criteria");
    verify->add_option("--criterion", criterion, "Run a single criterion")->check(CLI::Range(1, kCriteriaCount));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*tuples) {
            const auto axes = generate_axes(dim, bound);
            std::ostringstream text;
            text << "components,length,null\n";
            json rows = json::array();
            for (const auto& a : axes.all()) {
                text << csv_vec(a.step) << ',' << a.length << ',' << (a.is_null() ? 1 : 0) << '\n';
                rows.push_back({{"components", std::vector<std::int64_t>(a.step.data(), a.step.data() + a.step.size())},
                                {"length", a.length},
                                {"null", a.is_null()}});
            }
            if (!csv_path.empty()) open_out(csv_path) << text.str();
            emit(g, "tuples", {{"d", dim}, {"n", bound}, {"axes", rows}}, csv_path.empty() ? text.str() : "");
            return 0;
        }
        if (*ball) {
            const PolygonalMetric metric(generate_axes(dim, bound));
            const Eigen::MatrixXd v = metric.ball_vertices(radius);
            std::ostringstream text;
            text.precision(17);
            for (int i = 0; i < dim; ++i) text << 'x' << i + 1 << ',';
            text << "t\n";
            json rows = json::array();
            for (Eigen::Index r = 0; r < v.rows(); ++r) {
                json row = json::array();
                for (Eigen::Index c = 0; c < v.cols(); ++c) {
                    text << (c ? "," : "") << v(r, c);
                    row.push_back(v(r, c));
                }
                text << '\n';
                rows.push_back(row);
            }
            if (!csv_path.empty()) open_out(csv_path) << text.str();
            emit(g, "metric-ball", {{"d", dim}, {"n", bound}, {"radius", radius}, {"vertices", rows}},
                 csv_path.empty() ? text.str() : "");
            return 0;
        }
        if (*count) {
            const auto axes = generate_axes(dim, bound);
            const auto spec = count_paths_by_length(parse_event(target, dim, "--target"), axes);
            BigInt total = 0;
            for (const auto& [I, c] : spec) total += c;
            if (!csv_path.empty()) write_spectrum(csv_path, spec);
            json body{{"total", str(total)}, {"spectrum", spectrum_json(spec)}};
            std::string text = "total " + str(total) + "\n";
            if (length >= 0) {
                const auto it = spec.find(length);
                const BigInt at = it == spec.end() ? BigInt(0) : it->second;
                body["length"] = length;
                body["count_at_length"] = str(at);
                text += "length " + std::to_string(length) + " count " + str(at) + "\n";
            }
            emit(g, "count-paths", body, text);
            return 0;
        }
        if (*contmult) {
            ContMultArgs a;
            a.x = parse_list(args_s, "--args");
            if (!dirs_path.empty()) {
                const auto dirs = read_json(dirs_path);
                if (!dirs.is_array() || dirs.empty()) throw UsageError("--letters-dirs must be a list of vectors");
                const auto rows = dirs[0].size();
                a.directions = Eigen::MatrixXd(rows, dirs.size());
                for (std::size_t c = 0; c < dirs.size(); ++c) {
                    if (dirs[c].size() != rows) throw UsageError("direction vectors differ in length");
                    for (std::size_t r = 0; r < rows; ++r) a.directions(r, c) = dirs[c][r].get<double>();
                }
            }
            TruncationPolicy pol;
            pol.max_word_length = max_word;
            MonteCarloOptions mc;
            mc.samples = samples;
            mc.seed = effective_seed(g.seed);
            const auto r = continuous_multinomial(a, pol, mc);
            const char* method_name = r.method == ContMultMethod::WordSeries     ? "word-series"
                                      : r.method == ContMultMethod::BesselIntegral ? "bessel-integral"
                                                                                   : "monte-carlo";
            emit(g, "contmult",
                 {{"value", r.value},
                  {"std_error", r.std_error},
                  {"word_length_reached", r.word_length_reached},
                  {"last_contribution", r.last_contribution},
                  {"method", method_name}},
                 "value " + fmt(r.value) + "\nstd_error " + fmt(r.std_error) + "\nword_length_reached " +
                     std::to_string(r.word_length_reached) + "\nlast_contribution " + fmt(r.last_contribution) +
                     "\nmethod " + method_name + "\n");
            return 0;
        }
        if (*prop || *qprop) {
            const bool quotient = qprop->parsed();
            const auto axes = generate_axes(dim, bound);
            const auto y = parse_event(target, dim, "--target");
            const LatticeVec x = source.empty() ? LatticeVec(LatticeVec::Zero(dim + 1)) : parse_event(source, dim, "--source");
            const bool feynman = variant == "feynman";
            LengthSpectrum spec;
            std::function<cd(double)> value;
            json extra = json::object();
            if (quotient) {
                if (feynman) throw UsageError("quotient-prop supports the standard variant only");
                QuotientLattice q;
                for (double c : parse_list(circ_s, "--circumference")) {
                    if (c < 1 || c != std::floor(c)) throw UsageError("--circumference entries must be positive integers");
                    q.circumference.push_back(static_cast<std::int64_t>(c));
                }
                if (q.dim() != dim) throw UsageError("--circumference needs one entry per spatial dimension");
                spec = quotient_length_spectrum(q, x, y, axes);
                value = [&, q](double m) { return quotient_propagator_flat(q, x, y, axes, m); };
                extra["lifts_in_cone"] = in_cone_lifts(q, x, y, PolygonalMetric(axes)).size();
            } else {
                spec = feynman ? signed_length_spectrum(x, y, axes) : length_spectrum(x, y, axes);
                value = [&](double m) {
                    PropagatorRequest req{dim, bound, m, x, y, feynman ? Variant::Feynman : Variant::Standard};
                    return discrete_propagator(req, axes);
                };
            }
            const cd K = value(mass);
            if (!spectrum_path.empty()) write_spectrum(spectrum_path, spec.entries);
            if (!scan_path.empty()) {
                if (mmax <= 0) throw UsageError("--scan needs --mmax > 0");
                write_scan(scan_path, mmax, steps, value);
            }
            json body{{"mass", mass},
                      {"variant", variant},
                      {"value", cjson(K)},
                      {"paths", str(spec.total())},
                      {"spectrum", spectrum_json(spec.entries)}};
            body.update(extra);
            emit(g, quotient ? "quotient-prop" : "propagator", body,
                 "K = " + fmt(K) + "\npaths " + str(spec.total()) + "\n");
            return 0;
        }
        if (*orbit) {
            const auto b = parse_list(base_s, "--base");
            if (b.size() != 2) throw UsageError("--base needs re,im");
            const auto o = orbit_enumerate(branched_cylinder_generators(), cd(b[0], b[1]), max_word_orbit,
                                           kOrbitDedupeTolerance, t0);
            std::ostringstream text;
            text.precision(17);
            text << "t,x,y,tau,word\n";
            json rows = json::array();
            for (std::size_t i = 0; i < o.points.size(); ++i) {
                std::string w;
                for (int l : o.words[i]) w += std::to_string(l + 1);
                const auto& p = o.points[i];
                text << p(2) << ',' << p(0) << ',' << p(1) << ',' << o.taus[i] << ',' << w << '\n';
                rows.push_back({{"t", p(2)}, {"x", p(0)}, {"y", p(1)}, {"tau", o.taus[i]}, {"word", w}});
            }
            json body{{"group", group},
                      {"max_word", max_word_orbit},
                      {"words_before_dedupe", o.words_before_dedupe},
                      {"points", rows}};
            std::string summary = csv_path.empty() ? text.str() : "";
            if (orbit_sum) {
                const cd K = orbit_sum_propagator(o, SpacetimeVec::Zero(3), mass, 2);
                body["orbit_sum"] = cjson(K);
                summary += "orbit_sum " + fmt(K) + "\n";
            }
            if (!csv_path.empty()) open_out(csv_path) << text.str();
            emit(g, "orbit", body, summary);
            return 0;
        }
        if (*kl) {
            std::ifstream f(taus_path);
            if (!f) throw UsageError("cannot read " + taus_path);
            std::vector<double> taus;
            std::string line;
            int column = 0;
            bool first = true;
            while (std::getline(f, line)) {
                if (line.empty()) continue;
                std::vector<std::string> cells;
                std::stringstream ls(line);
                std::string c;
                while (std::getline(ls, c, ',')) cells.push_back(c);
                if (first) {
                    first = false;
                    bool header = false;
                    for (std::size_t i = 0; i < cells.size(); ++i)
                        if (cells[i] == "tau") column = static_cast<int>(i), header = true;
                    try {
                        std::stod(cells[0]);
                    } catch (const std::exception&) {
                        header = true;
                    }
                    if (header) continue;
                }
                if (column >= static_cast<int>(cells.size())) throw UsageError("short row in " + taus_path);
                taus.push_back(parse_list(cells[column], "tau")[0]);
            }
            if (taus.empty()) throw UsageError("no proper times in " + taus_path);
            if (mmax <= mmin) throw UsageError("--mmax must exceed --mmin");
            std::vector<double> grid;
            for (int k = 0; k <= steps; ++k) grid.push_back(mmin + (mmax - mmin) * k / steps);
            const auto s = kl_spectrum(taus, grid, norm == "sqrt" ? KLNormalization::InverseSqrtN : KLNormalization::InverseN);
            std::ostringstream text;
            text.precision(17);
            text << "m,rho\n";
            for (std::size_t k = 0; k < grid.size(); ++k) text << grid[k] << ',' << s.values[k] << '\n';
            if (!csv_path.empty()) open_out(csv_path) << text.str();
            json body{{"taus", taus.size()}, {"norm", norm}, {"m", grid}, {"rho", s.values}};
            std::string summary = csv_path.empty() ? text.str() : "";
            if (peaks > 0) {
                const auto p = spectral_peaks(s, peaks, 1.0);
                body["peaks"] = p;
                summary += "peaks";
                for (double v : p) summary += " " + fmt(v);
                summary += "\n";
            }
            emit(g, "kl-spectrum", body, summary);
            return 0;
        }
        if (*ferm) {
            const auto axes = generate_axes(dim, bound);
            const auto y = parse_event(target, dim, "--target");
            const LatticeVec x = LatticeVec::Zero(dim + 1);
            const bool feynman = variant == "feynman";
            FermionResult r;
            json body;
            if (spinors_path.empty()) {
                r = discrete_fermion_propagator(x, y, mass, std::nullopt, axes, feynman);
            } else {
                const auto js = read_json(spinors_path);
                const auto rep = gamma_basis(dim).matrices[0].rows();
                auto vec = [&](const char* key) {
                    if (!js.contains(key) || !js[key].is_array() || static_cast<Eigen::Index>(js[key].size()) != rep)
                        throw UsageError(std::string("spinor '") + key + "' needs " + std::to_string(rep) + " entries");
                    Eigen::VectorXcd v(rep);
                    for (Eigen::Index i = 0; i < rep; ++i) {
                        const auto& e = js[key][i];
                        v(i) = e.is_array() ? cd(e.at(0).get<double>(), e.at(1).get<double>()) : cd(e.get<double>(), 0.0);
                    }
                    return v;
                };
                r = discrete_fermion_propagator(x, y, mass, SpinorPair{vec("v"), vec("w")}, axes, feynman);
            }
            if (!hist_path.empty()) {
                auto f = open_out(hist_path);
                f << "lo,hi,count\n";
                double lo = 0, hi = 0;
                if (!r.total_rapidities.empty()) {
                    lo = hi = r.total_rapidities[0].real();
                    for (const auto& e : r.total_rapidities) lo = std::min(lo, e.real()), hi = std::max(hi, e.real());
                }
                if (hi <= lo) hi = lo + 1.0;
                std::vector<std::size_t> h(bins, 0);
                for (const auto& e : r.total_rapidities)
                    ++h[std::min<std::size_t>(bins - 1, static_cast<std::size_t>((e.real() - lo) / (hi - lo) * bins))];
                for (int k = 0; k < bins; ++k)
                    f << lo + (hi - lo) * k / bins << ',' << lo + (hi - lo) * (k + 1) / bins << ',' << h[k] << '\n';
            }
            body = {{"value", cjson(r.value)}, {"paths", r.paths}, {"variant", variant}};
            emit(g, "fermion", body, "value " + fmt(r.value) + "\npaths " + std::to_string(r.paths) + "\n");
            return 0;
        }
        if (*diag) {
            DiagramSpec spec;
            GridSpec grid;
            TheorySpec theory{1, 1.0, {{3, 1.0}}};
            if (!builtin.empty()) {
                bool found = false;
                for (const auto& t : builtin_test_diagrams())
                    if (builtin == t.name) spec = t.diagram, grid = t.grid, found = true;
                if (!found) throw UsageError("unknown built-in diagram " + builtin);
            } else if (spec_path.empty() || grid_path.empty()) {
                throw UsageError("diagram needs --builtin or both --spec and --grid");
            }
            auto point = [](const json& p) {
                SpacetimeVec v(p.size());
                for (std::size_t i = 0; i < p.size(); ++i) v(i) = p[i].get<double>();
                return v;
            };
            try {
                if (!spec_path.empty()) {
                    const auto js = read_json(spec_path);
                    spec = DiagramSpec{};
                    for (const auto& e : js.at("externals")) spec.externals.push_back(point(e));
                    for (const auto& v : js.at("vertices")) spec.vertices.push_back(v.is_object() ? v.at("degree").get<int>() : v.get<int>());
                    for (const auto& e : js.at("edges")) spec.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
                }
                if (!theory_path.empty()) {
                    const auto js = read_json(theory_path);
                    theory.d = js.value("d", 1);
                    theory.m = js.value("m", 1.0);
                    if (js.contains("couplings")) {
                        theory.couplings.clear();
                        for (const auto& [k, v] : js.at("couplings").items()) theory.couplings[std::stoi(k)] = v.get<double>();
                    }
                }
                if (!grid_path.empty()) {
                    const auto js = read_json(grid_path);
                    grid.lo = point(js.at("lo"));
                    grid.hi = point(js.at("hi"));
                    grid.cells = js.value("cells", grid.cells);
                    grid.length_step = js.value("length_step", grid.length_step);
                    grid.mc_samples = js.value("mc_samples", grid.mc_samples);
                    grid.seed = js.value("seed", grid.seed);
                }
            } catch (const json::exception& e) {
                throw UsageError(std::string("malformed diagram input: ") + e.what());
            }
            if (std::getenv("LATTICEPROP_SEED") || g.seed != 1) grid.seed = effective_seed(g.seed);
            json body{{"method", method}};
            std::string text;
            DiagramValue pos, len;
            if (method != "length") {
                pos = contribution_position_space(spec, theory, grid);
                body["position_space"] = {{"value", cjson(pos.value)}, {"std_error", pos.std_error}, {"nodes", pos.nodes}};
                text += "position_space " + fmt(pos.value) + " (std_error " + fmt(pos.std_error) + ")\n";
            }
            if (method != "pos") {
                len = contribution_length_domain(spec, theory, grid);
                body["length_domain"] = {{"value", cjson(len.value)}, {"std_error", len.std_error}, {"nodes", len.nodes}};
                text += "length_domain " + fmt(len.value) + " (std_error " + fmt(len.std_error) + ")\n";
            }
            if (method == "both") {
                const double rel = std::abs(pos.value - len.value) / std::abs(pos.value);
                body["relative_difference"] = rel;
                text += "relative_difference " + fmt(rel) + "\n";
            }
            emit(g, "diagram", body, text);
            return 0;
        }
        if (*teich) {
            const auto axes = generate_axes(1, bound);
            const auto x = source.empty() ? lattice_vec({1, 0}) : parse_event(source, 1, "--source");
            const auto y = parse_event(target, 1, "--target");
            const auto rep = boundary_decomposition_check(QuotientLattice{{circumference}}, x, y, axes);
            json by = json::object();
            std::string text = "total " + str(rep.total) + "\n";
            for (const auto& [M, c] : rep.by_crossings) {
                by[std::to_string(M)] = str(c);
                text += "crossings " + std::to_string(M) + ": " + str(c) + "\n";
            }
            text += std::string("partition_exact ") + (rep.partition_exact ? "yes" : "no") + "\nzero_class_matches " +
                    (rep.zero_class_matches ? "yes" : "no") + "\nsingle_crossing_matches " +
                    (rep.single_crossing_matches ? "yes" : "no") + " (" + std::to_string(rep.single_crossing_classes) +
                    " classes)\n";
            emit(g, "teich-check",
                 {{"total", str(rep.total)},
                  {"by_crossings", by},
                  {"interior_paths", str(rep.interior_paths)},
                  {"partition_exact", rep.partition_exact},
                  {"zero_class_matches", rep.zero_class_matches},
                  {"single_crossing_matches", rep.single_crossing_matches},
                  {"single_crossing_classes", rep.single_crossing_classes}},
                 text);
            const bool ok = rep.partition_exact && rep.zero_class_matches && rep.single_crossing_matches;
            return ok ? 0 : 1;
        }
        if (*verify) {
            std::vector<int> ids;
            if (criterion > 0)
                ids = {criterion};
            else if (quick)
                ids = {1, 5, 10};
            else
                for (int i = 1; i <= kCriteriaCount; ++i) ids.push_back(i);
            bool all = true;
            json rows = json::array();
            for (int id : ids) {
                const auto r = run_criterion(id);
                all = all && r.pass;
                if (!g.json) std::cout << format_result(r) << std::endl;
                rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
            }
            if (g.json) emit(g, "verify", {{"criteria", rows}, {"all_pass", all}}, "");
            return all ? 0 : 1;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::InvalidArgument ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
