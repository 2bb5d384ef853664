// moebius-hus: classification, region export, perturbed-orbit simulation,
// stability-bound evaluation and verification suites for hyperbolic Moebius
// difference equations z_{i+1} = (a z_i + b)/(c z_i + d).
//
// Exit codes: 0 ok, 2 input error, 3 not hyperbolic, 4 orbit hit infinity,
// 5 parameter gate, 6 verification failure.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "moebius/json_io.hpp"

namespace {

using namespace moebius;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNotHyperbolic = 3;
constexpr int kExitInfinity = 4;
constexpr int kExitParameterGate = 5;
constexpr int kExitVerification = 6;

struct MapSource {
    std::string path;
    std::string preset;
    double pielou_a = 4.0;
    double pielou_c = 1.0;
};

void add_map_options(CLI::App* cmd, MapSource& src) {
    cmd->add_option("--map", src.path, "map coefficient file (JSON)");
    cmd->add_option("--preset", src.preset, "named preset: golden | pielou");
    cmd->add_option("--A", src.pielou_a, "pielou parameter A > 1");
    cmd->add_option("--C", src.pielou_c, "pielou parameter C > 0");
}

MobiusMap load_map(const MapSource& src) {
    if (!src.preset.empty()) {
        if (src.preset == "golden") return preset_golden();
        if (src.preset == "pielou") return preset_pielou(src.pielou_a, src.pielou_c);
        throw Error("unknown preset: " + src.preset);
    }
    if (src.path.empty()) throw Error("need --map <file> or --preset <name>");
    std::ifstream in(src.path);
    if (!in) throw Error("cannot read map file: " + src.path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(std::string("bad map file: ") + e.what());
    }
    return map_from_json(j);
}

ExtendedComplex parse_point(const std::string& text) {
    if (text == "inf") return ExtendedComplex::infinity();
    std::istringstream is(text);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(is >> re)) throw Error("bad point: " + text);
    if (is >> comma) {
        if (comma != ',' || !(is >> im)) throw Error("bad point: " + text);
    }
    return ExtendedComplex(re, im);
}

// Output sink: file path or "-" for stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path != "-") {
            file_.open(path);
            if (!file_) throw Error("cannot write: " + path);
        }
    }
    std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

// ---- classify --------------------------------------------------------------

int run_classify(const MapSource& src) {
    const MobiusMap g = load_map(src);
    json out{{"class", to_string(classify(g))}, {"map", to_json(g)}};
    if (classify(g) != MapClass::HyperbolicRealTrace) {
        std::cout << out.dump(2) << "\n";
        return kExitNotHyperbolic;
    }
    if (is_linear(g)) {
        out["note"] = "c == 0: linear map, analysis requires c != 0";
        std::cout << out.dump(2) << "\n";
        return kExitInput;
    }
    const HyperbolicProfile p = profile(g);
    out.update(to_json(p));
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

// ---- regions ---------------------------------------------------------------

// Closed boundary path of one avoided-region piece in the w plane.
std::vector<Complex> piece_path(const AvoidedRegionW& region, int piece, std::size_t n) {
    std::vector<Complex> path;
    path.reserve(n);
    const double pi = 3.141592653589793238462643383279;
    if (piece == 1) {
        const double b = region.band(region.t1);
        const std::size_t arc = n / 2, seg = n - arc;
        for (std::size_t j = 0; j < arc; ++j) {
            path.push_back(std::polar(
                b, pi / 2.0 + pi * static_cast<double>(j) / static_cast<double>(arc)));
        }
        for (std::size_t j = 0; j < seg; ++j) {
            const double y =
                -b + 2.0 * b * static_cast<double>(j) / static_cast<double>(seg);
            path.push_back(Complex(0.0, y));
        }
    } else if (piece == 2) {
        const double b = region.band(region.t2);
        const double w = 1.0 / region.k;
        const std::size_t q = n / 4;
        for (std::size_t j = 0; j < q; ++j)
            path.push_back(
                Complex(w * static_cast<double>(j) / static_cast<double>(q), -b));
        for (std::size_t j = 0; j < q; ++j)
            path.push_back(Complex(
                w, -b + 2.0 * b * static_cast<double>(j) / static_cast<double>(q)));
        for (std::size_t j = 0; j < q; ++j)
            path.push_back(Complex(
                w - w * static_cast<double>(j) / static_cast<double>(q), b));
        for (std::size_t j = 0; j < n - 3 * q; ++j)
            path.push_back(Complex(
                0.0, b - 2.0 * b * static_cast<double>(j) /
                             static_cast<double>(n - 3 * q)));
    } else {
        const double b = region.band(region.t3);
        const Complex c0(1.0 / region.k, 0.0);
        const std::size_t arc = n / 2, seg = n - arc;
        for (std::size_t j = 0; j < arc; ++j) {
            path.push_back(c0 + std::polar(b, -pi / 2.0 +
                                                  pi * static_cast<double>(j) /
                                                      static_cast<double>(arc)));
        }
        for (std::size_t j = 0; j < seg; ++j) {
            const double y =
                b - 2.0 * b * static_cast<double>(j) / static_cast<double>(seg);
            path.push_back(c0 + Complex(0.0, y));
        }
    }
    return path;
}

json polyline_json(const std::vector<Complex>& points) {
    json arr = json::array();
    for (const Complex& z : points) arr.push_back(to_json(z));
    return arr;
}

int run_regions(const MapSource& src, double r, std::size_t samples,
                std::optional<double> delta_opt, const std::string& out_path) {
    const MobiusMap g = load_map(src);
    if (classify(g) != MapClass::HyperbolicRealTrace) return kExitNotHyperbolic;
    if (is_linear(g)) return kExitInput;
    const HyperbolicProfile p = profile(g);
    const double delta =
        delta_opt.value_or(0.5 * (1.0 - 1.0 / p.k) * (1.0 - 1.0 / p.k));

    json regions = json::array();
    const double ac = std::abs(g.c);

    // dS(r) and dT(r)
    const DiskSpec s_b{p.pole(), r / ac, DiskSense::Boundary};
    regions.push_back(json{{"id", "S_boundary"},
                           {"frame", "z"},
                           {"kind", "disk"},
                           {"center", to_json(s_b.center)},
                           {"radius", s_b.radius},
                           {"polyline", polyline_json(sample_boundary(s_b, samples))}});

    const DiskSpec t_b{g.a / g.c, 1.0 / (r * ac), DiskSense::Boundary};
    json t_entry{{"id", "T_boundary"},
                 {"frame", "z"},
                 {"kind", "disk"},
                 {"center", to_json(t_b.center)},
                 {"radius", t_b.radius},
                 {"polyline", polyline_json(sample_boundary(t_b, samples))}};
    if (r + 1.0 / r < p.trace()) {
        t_entry["nesting_margin"] = closure_nesting_margin(p, r);
    } else {
        t_entry["hypothesis_violated"] = true;
    }
    regions.push_back(t_entry);

    // closed-form h-images with the circle-fit oracle residual
    auto image_entry = [&](const char* id, double radius_in_r, const DiskSpec& cf) {
        const DiskSpec source{p.pole(), radius_in_r / ac, DiskSense::Boundary};
        const verify::CircleFit fit = verify::oracle_circle_image(
            p.h, source, std::max<std::size_t>(samples, 16));
        const double residual =
            std::max({fit.residual, std::abs(fit.disk.center - cf.center),
                      std::abs(fit.disk.radius - cf.radius)});
        return json{{"id", id},
                    {"frame", "w"},
                    {"kind", "disk"},
                    {"center", to_json(cf.center)},
                    {"radius", cf.radius},
                    {"oracle_residual", residual},
                    {"polyline", polyline_json(sample_boundary(cf, samples))}};
    };
    regions.push_back(
        image_entry("h_image_sqrtk", 1.0 / std::sqrt(p.k), image_circle_sqrtk(p)));
    regions.push_back(
        image_entry("h_image_tau_half", 1.0 + p.tau / 2.0, image_circle_tau_half(p)));

    // avoided region: w-plane pieces pulled back through h^-1, plus the
    // inscribed pole disk
    const AvoidedRegionW avoided(p.k, delta);
    json pieces = json::array();
    const char* names[] = {"R1", "R2", "R3"};
    for (int piece = 1; piece <= 3; ++piece) {
        std::vector<Complex> zpath;
        for (const Complex& w : piece_path(avoided, piece, samples)) {
            const ExtendedComplex z = p.h_inv_apply(ExtendedComplex(w));
            if (!z.is_infinity()) zpath.push_back(z.value());
        }
        pieces.push_back(
            json{{"id", names[piece - 1]}, {"polyline", polyline_json(zpath)}});
    }
    json avoided_entry{{"id", "avoided"},
                       {"frame", "z"},
                       {"kind", "union"},
                       {"delta", delta},
                       {"pieces", pieces}};
    bool contained = true;
    double eps_tilde_value = 0.0;
    try {
        eps_tilde_value = epsilon_tilde(p, delta);
    } catch (const CrossCheckFailed&) {
        eps_tilde_value = moebius::detail::epsilon_tilde_raw(p, delta);
        contained = false;
    }
    avoided_entry["inscribed_disk"] = json{{"center", to_json(p.pole())},
                                           {"radius", eps_tilde_value},
                                           {"containment_verified", contained}};
    regions.push_back(avoided_entry);

    // escape region E_f: the tau/2 image disk minus the ball at the origin
    const DiskSpec outer = image_circle_tau_half(p);
    const double ball = p.k * delta / (p.k - 1.0);
    regions.push_back(json{
        {"id", "escape"},
        {"frame", "w"},
        {"kind", "union"},
        {"delta", delta},
        {"pieces",
         json::array(
             {json{{"id", "outer_disk"},
                   {"center", to_json(outer.center)},
                   {"radius", outer.radius},
                   {"polyline", polyline_json(sample_boundary(outer, samples))}},
              json{{"id", "removed_ball"},
                   {"center", to_json(Complex(0.0, 0.0))},
                   {"radius", ball},
                   {"polyline",
                    polyline_json(sample_boundary(
                        DiskSpec{Complex(0.0, 0.0), ball, DiskSense::Boundary},
                        samples))}}})}});

    Sink sink(out_path);
    sink.out() << json{{"map", to_json(g)},
                       {"profile", to_json(p)},
                       {"r", r},
                       {"regions", regions}}
                      .dump(2)
               << "\n";
    return kExitOk;
}

// ---- orbit -----------------------------------------------------------------

PerturbationKind parse_model(const std::string& name) {
    if (name == "none") return PerturbationKind::None;
    if (name == "uniform") return PerturbationKind::UniformDisk;
    if (name == "boundary") return PerturbationKind::BoundaryAdversarial;
    if (name == "outward") return PerturbationKind::RadialOutward;
    throw Error("unknown model: " + name);
}

int run_orbit(const MapSource& src, const std::string& z0_text, double eps,
              std::size_t steps, const std::string& model_name, std::uint64_t seed,
              double t, std::optional<double> delta_opt, const std::string& out_path) {
    const MobiusMap g = load_map(src);
    if (classify(g) != MapClass::HyperbolicRealTrace) return kExitNotHyperbolic;
    if (is_linear(g)) return kExitInput;
    const HyperbolicProfile p = profile(g);

    if (t != 0.0 && !(t > 0.0 && t <= p.tau)) {
        throw HypothesisViolated("t must lie in (0, tau]");
    }
    const double delta = delta_opt.value_or(default_delta(p.k));
    if (!(delta > 0.0 && delta < (1.0 - 1.0 / p.k) * (1.0 - 1.0 / p.k))) {
        throw DeltaTooLarge("delta must lie in (0, (1-1/k)^2)");
    }

    const PerturbationModel model{parse_model(model_name), eps, seed};
    OrbitRecord rec = perturbed_orbit(g, parse_point(z0_text), steps, model);
    rec.t = t;
    rec.delta = delta;
    if (!rec.truncated()) shadow_orbit(g, rec);
    annotate_regions(p, delta, rec);

    Sink sink(out_path);
    for (std::size_t i = 0; i < rec.points.size(); ++i) {
        sink.out() << orbit_line(rec, i).dump() << "\n";
    }
    double max_dev = 0.0, max_bound = 0.0;
    for (double d : rec.deviation) max_dev = std::max(max_dev, d);
    for (double b : rec.bound) max_bound = std::max(max_bound, b);
    json summary{{"steps", rec.points.size() - 1},
                 {"eps", eps},
                 {"max_dev", max_dev},
                 {"max_bound", max_bound},
                 {"within_bound", max_dev <= max_bound || rec.bound.empty()}};
    if (rec.truncated()) {
        summary["truncated_at"] = rec.hit_infinity_at;
    }
    sink.out() << json{{"summary", summary}}.dump() << "\n";
    return rec.truncated() ? kExitInfinity : kExitOk;
}

// ---- bounds ----------------------------------------------------------------

int run_bounds(const MapSource& src, std::optional<double> t_opt,
               std::optional<double> delta_opt) {
    const MobiusMap g = load_map(src);
    if (classify(g) != MapClass::HyperbolicRealTrace) return kExitNotHyperbolic;
    if (is_linear(g)) return kExitInput;
    const HyperbolicProfile p = profile(g);

    const double t = t_opt.value_or(p.tau / 2.0);
    if (!(t > 0.0 && t <= p.tau)) throw HypothesisViolated("t must lie in (0, tau]");
    const double delta = delta_opt.value_or(default_delta(p.k));

    const BoundSet bs = make_bound_set(p, delta, t);
    json out{{"t", t},
             {"delta", delta},
             {"K", bs.K},
             {"M", bs.M},
             {"N", bs.N},
             {"N0", escape_time_bound_simplified(p, delta)},
             {"eps_cap", t / (std::abs(g.c) * (1.0 + t))},
             {"H_coeff_growth", bs.coeff_growth},
             {"H_coeff_tail", bs.coeff_tail}};
    try {
        out["eps_tilde"] = epsilon_tilde(p, delta);
        out["eps_tilde_containment_verified"] = true;
    } catch (const CrossCheckFailed&) {
        out["eps_tilde"] = moebius::detail::epsilon_tilde_raw(p, delta);
        out["eps_tilde_containment_verified"] = false;
    }
    out["transfer_epsilon"] = transfer_epsilon(p, delta);
    out["transfer_epsilon_note"] =
        "sup|h'| sampled over 1024 points of the inflated tau/2 disk; "
        "containment holds up to sampling accuracy";
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

// ---- verify ----------------------------------------------------------------

int run_verify(const std::string& suite, std::size_t trials, std::uint64_t seed) {
    std::vector<verify::SuiteId> ids;
    if (suite == "all") {
        ids.assign(verify::all_suites().begin(), verify::all_suites().end());
    } else {
        ids.push_back(verify::suite_from_string(suite));
    }
    json reports = json::array();
    std::size_t total_failures = 0;
    for (verify::SuiteId id : ids) {
        const verify::SuiteReport report = verify::run_suite(id, trials, seed);
        total_failures += report.failures;
        reports.push_back(to_json(report));
    }
    std::cout << json{{"seed", seed},
                      {"trials", trials},
                      {"total_failures", total_failures},
                      {"reports", reports}}
                     .dump(2)
              << "\n";
    return total_failures == 0 ? kExitOk : kExitVerification;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Hyers-Ulam stability toolkit for hyperbolic Moebius difference equations"};
    app.require_subcommand(1);

    MapSource src;

    auto* classify_cmd =
        app.add_subcommand("classify", "classify a map and print its profile");
    add_map_options(classify_cmd, src);

    auto* regions_cmd = app.add_subcommand("regions", "export region geometry as JSON");
    add_map_options(regions_cmd, src);
    double r = 2.0;
    std::size_t samples = 64;
    std::optional<double> delta_opt;
    std::string out_path = "-";
    regions_cmd->add_option("--r", r, "radius parameter of S(r)/T(r)");
    regions_cmd->add_option("--samples", samples, "boundary samples per region")
        ->check(CLI::Range(std::size_t{3}, std::size_t{100000}));
    regions_cmd->add_option("--delta", delta_opt, "dilation noise level");
    regions_cmd->add_option("--out", out_path, "output file, - for stdout");

    auto* orbit_cmd =
        app.add_subcommand("orbit", "simulate a perturbed orbit with its shadow");
    add_map_options(orbit_cmd, src);
    std::string z0_text = "2,0";
    double eps = 0.0;
    std::size_t steps = 1000;
    std::string model_name = "none";
    std::uint64_t seed = 0;
    double t_orbit = 0.0;
    orbit_cmd->add_option("--z0", z0_text, "start point: re[,im] or inf");
    orbit_cmd->add_option("--eps", eps, "perturbation magnitude")
        ->check(CLI::NonNegativeNumber);
    orbit_cmd->add_option("--steps", steps, "number of steps");
    orbit_cmd->add_option("--model", model_name, "none | uniform | boundary | outward");
    orbit_cmd->add_option("--seed", seed, "perturbation seed");
    orbit_cmd->add_option("--t", t_orbit, "confinement parameter in (0, tau], 0 = tau");
    orbit_cmd->add_option("--delta", delta_opt, "dilation noise level for region labels");
    orbit_cmd->add_option("--out", out_path, "output file, - for stdout");

    auto* bounds_cmd = app.add_subcommand("bounds", "evaluate every stability constant");
    add_map_options(bounds_cmd, src);
    std::optional<double> t_opt;
    bounds_cmd->add_option("--t", t_opt, "confinement parameter in (0, tau]");
    bounds_cmd->add_option("--delta", delta_opt, "dilation noise level");

    auto* verify_cmd = app.add_subcommand("verify", "run verification suites");
    std::string suite = "all";
    std::size_t trials = 200;
    std::uint64_t vseed = 1;
    verify_cmd->add_option("--suite", suite, "suite name or all");
    verify_cmd->add_option("--trials", trials, "trials per suite")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", vseed, "suite seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (classify_cmd->parsed()) return run_classify(src);
        if (regions_cmd->parsed())
            return run_regions(src, r, samples, delta_opt, out_path);
        if (orbit_cmd->parsed())
            return run_orbit(src, z0_text, eps, steps, model_name, seed, t_orbit,
                             delta_opt, out_path);
        if (bounds_cmd->parsed()) return run_bounds(src, t_opt, delta_opt);
        if (verify_cmd->parsed()) return run_verify(suite, trials, vseed);
    } catch (const DeltaTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParameterGate;
    } catch (const HypothesisViolated& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParameterGate;
    } catch (const NotHyperbolic& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotHyperbolic;
    } catch (const UnknownSuite& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const LinearMap& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const DegenerateMap& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return kExitInput;
}
