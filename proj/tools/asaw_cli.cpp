// Command-line front end.  Exit status: 0 success, 1 property failure, 2 usage error.

#include <asaw/checks.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

using namespace asaw;
using checks::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value file; keys mirror long flag names without the leading dashes.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::string find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return argv[i + 1];
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return {};
}

struct Config {
    int d = 2;
    std::string dist = "nn";
    std::string kappa = "0";
    std::string delta;  // empty: default dyadic
    std::string method = "ratio";
    std::string klass = "saw";
    std::string format = "csv";
    std::string walk;
    std::string plaquette;
    std::string x;
    int max_n = 8;
    int order = 8;
    int m = 0;
    int side = 3;
    long n = 6;
    double mu = 1.0;
    int threads = 0;
    std::uint64_t seed = 20240601;
    bool selftest = false;
};

// Applies config-file values; flags given on the command line are parsed afterwards and win.
void apply_config(Config& c, const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) {
        try {
            if (k == "d") c.d = std::stoi(v);
            else if (k == "dist") c.dist = v;
            else if (k == "kappa") c.kappa = v;
            else if (k == "delta") c.delta = v;
            else if (k == "method") c.method = v;
            else if (k == "class") c.klass = v;
            else if (k == "format") c.format = v;
            else if (k == "walk") c.walk = v;
            else if (k == "plaquette") c.plaquette = v;
            else if (k == "x") c.x = v;
            else if (k == "max-n") c.max_n = std::stoi(v);
            else if (k == "order") c.order = std::stoi(v);
            else if (k == "m") c.m = std::stoi(v);
            else if (k == "side") c.side = std::stoi(v);
            else if (k == "n") c.n = std::stol(v);
            else if (k == "mu") c.mu = std::stod(v);
            else if (k == "threads") c.threads = std::stoi(v);
            else if (k == "seed") c.seed = std::stoull(v);
            else throw UsageError("unknown config key " + k);
        } catch (const std::logic_error&) {
            throw UsageError("malformed value for config key " + k + ": " + v);
        }
    }
}

struct Ctx {
    Config& c;
    StepDistribution dist() const { return parse_distribution(c.dist, c.d); }
    Rational kappa() const {
        Rational k = parse_rational(c.kappa);
        if (k < 0) throw UsageError("kappa must be nonnegative");
        return k;
    }
    ModelParams params() const { return ModelParams(kappa(), dist()); }
    Rational delta(const StepDistribution& D) const {
        if (!c.delta.empty()) return parse_rational(c.delta);
        return default_delta(ModelParams(kappa(), D));
    }
};

json envelope(const std::string& command) { return json{{"schema", 1}, {"command", command}}; }

int emit(json j) {
    std::cout << j.dump(2) << '\n';
    if (j.contains("passed") && !j["passed"].get<bool>()) return 1;
    return 0;
}

int emit(const std::string& command, const json& body) {
    json j = envelope(command);
    j.update(body);
    return emit(j);
}

json series_json(const Series& s) {
    json a = json::array();
    for (const auto& c : s.coeffs()) a.push_back(to_string(c));
    return a;
}

json spatial_json(const SpatialSeries& S) {
    json o = json::object();
    for (const auto& [x, s] : S.entries())
        if (!s.is_zero()) o[x.str()] = series_json(s);
    return o;
}

// Options that may come from the command line or the config file.
const std::string& need(const std::string& v, const std::string& flag) {
    if (v.empty()) throw UsageError(flag + " is required (on the command line or in the config file)");
    return v;
}

Point parse_point(const std::string& s, int d) {
    Walk w = parse_walk(s);
    if (w.steps() != 0 || w.dim() != d) throw UsageError("expected a single " + std::to_string(d) + "-dimensional point: " + s);
    return w[0];
}

// "x1,...,xd;i,j" with 1-based axes.
Plaquette parse_plaquette(const std::string& s, int d) {
    auto semi = s.find(';');
    if (semi == std::string::npos) throw UsageError("plaquette must look like base;i,j");
    Point base = parse_point(s.substr(0, semi), d);
    std::string axes = s.substr(semi + 1);
    auto comma = axes.find(',');
    if (comma == std::string::npos) throw UsageError("plaquette axes must look like i,j");
    int i = std::stoi(axes.substr(0, comma)) - 1, j = std::stoi(axes.substr(comma + 1)) - 1;
    if (i < 0 || j < 0 || i >= d || j >= d || i == j) throw UsageError("plaquette axes out of range");
    return make_plaquette(base, i, j);
}

json combine(const std::vector<std::pair<std::string, json>>& parts) {
    json j = json::object();
    bool ok = true;
    for (const auto& [k, v] : parts) {
        j[k] = v;
        ok = ok && v.at("passed").get<bool>();
    }
    j["passed"] = ok;
    return j;
}

// Small module suites, each well under a minute.

json selftest_enumerate() {
    auto D = make_nearest_neighbour(2);
    ModelParams P(Rational(1, 10), D);
    auto t = mass_table(P, 8, false);
    long saws[] = {1, 4, 12, 36, 100, 284, 780, 2172, 5916};
    bool ok = true;
    for (int n = 0; n <= 8; ++n) {
        auto un = static_cast<std::size_t>(n);
        ok = ok && t.saw_count[un] == static_cast<std::uint64_t>(saws[n]);
        ok = ok && t.b[un] <= t.h[un] && t.h[un] <= t.c[un];
    }
    // Brute force over all walks, filtering by self-avoidance.
    std::vector<Rational> c(9, Rational(0));
    enumerate_walks(P, 8, WalkFilter::walks, [&](const Walk& w) {
        if (is_self_avoiding(w)) c[static_cast<std::size_t>(w.steps())] += asaw_weight(P, w);
    });
    for (int n = 0; n <= 8; ++n) ok = ok && c[static_cast<std::size_t>(n)] == t.c[static_cast<std::size_t>(n)];
    json bridges = checks::bridge_supermultiplicativity(D, 10, {Rational(0), Rational(1, 10)});
    return combine({{"mass_table_oracle", json{{"passed", ok}}}, {"bridge_supermultiplicativity", bridges}});
}

json selftest_two_point() {
    auto D = make_nearest_neighbour(2);
    bool ok = true;
    for (const auto& k : {Rational(0), Rational(1, 10)}) {
        ModelParams P(k, D);
        auto G = two_point_coeffs(P, 8);
        auto t = mass_table(P, 8, false);
        Series tot = G.total();
        for (int n = 0; n <= 8; ++n) ok = ok && tot[n] == t.c[static_cast<std::size_t>(n)];
        // Lattice symmetry: G(x) = G(reflect x).
        for (const auto& [x, s] : G.entries()) ok = ok && G.get(reflect(x, 0)) == s && G.get(reflect(x, 1)) == s;
    }
    return json{{"sum_over_x_equals_c_n", ok}, {"passed", ok}};
}

json selftest_unfold() {
    auto D = make_nearest_neighbour(2);
    auto t = kappa_thresholds(D);
    return combine({{"multivalued_unfolding", checks::unfolding_suite(D, 6, t.delta_default, {Rational(0), t.kappa_decay})},
                    {"classical_preimages", checks::preimage_counts(D, 6)},
                    {"split_map", checks::split_map_suite(D, 6, t.delta_default)},
                    {"hardy_ramanujan", checks::hardy_ramanujan({100, 1000, 10000})}});
}

json selftest_flips(std::uint64_t seed) {
    auto D = make_nearest_neighbour(2);
    return combine({{"flip_suite", checks::flip_suite(D, 6, {Rational(0), Rational(1, 10)})},
                    {"nonflippable_bound", checks::nonflippable_bound(D, 7)},
                    {"greedy_random_d2", checks::greedy_random(2, 1000, seed)},
                    {"greedy_random_d3", checks::greedy_random(3, 1000, seed)}});
}

json selftest_lace() {
    auto D = make_nearest_neighbour(2);
    return combine({{"interaction_product", checks::interaction_product_identity(D, 5, {Rational(0), Rational(1, 10), Rational(1, 3)})},
                    {"recursion_identity", checks::recursion_identity(D, 6, {Rational(0), Rational(1, 10)})},
                    {"diagram_bounds", checks::diagram_bounds(D, 6, {2, 3}, {Rational(0), Rational(1, 10)})}});
}

json selftest_zc() { return combine({{"critical_points", checks::critical_points(ModelParams(0, make_nearest_neighbour(2)), 8)}}); }

json selftest_thresholds() {
    json rep = json::object();
    bool ok = true;
    Rational prev = 1;
    for (int L = 1; L <= 3; ++L) {
        auto D = make_spread_out(2, L);
        auto t = kappa_thresholds(D);
        bool edge = asm_condition(D, t.kappa_asm) && !asm_condition(D, t.kappa_asm * 2);
        bool decay = decay_condition(D, t.kappa_decay, t.delta_exponent) && decay_condition(D, Rational(0), t.delta_exponent);
        ok = ok && edge && decay && t.kappa_asm < prev;
        prev = t.kappa_asm;
        rep["L=" + std::to_string(L)] = {{"kappa_asm", to_string(t.kappa_asm)}, {"asm_edge", edge}, {"decay_holds", decay}};
    }
    rep["passed"] = ok;
    return rep;
}

json selftest_torus() {
    auto D = make_nearest_neighbour(2);
    return combine({{"torus_bound", checks::torus_bound(D, 3, 6, {Rational(0), kappa_thresholds(D).kappa_asm / 2})}});
}

json selftest_greens() {
    return combine({{"srw_asymptotics", checks::srw_asymptotics({{make_nearest_neighbour(3), Point{10, 0, 0}, 0.15}})}});
}

json selftest_partitions() {
    bool ok = true;
    for (long n = 0; n <= 20; ++n) {
        long count = 0;
        for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
            long s = 0;
            for (long p = 1; p <= n; ++p)
                if (mask >> (p - 1) & 1UL) s += p;
            if (s == n) ++count;
        }
        ok = ok && distinct_partitions(n) == count;
    }
    return combine({{"subset_oracle", json{{"passed", ok}}}, {"hardy_ramanujan", checks::hardy_ramanujan({100, 1000, 10000})}});
}

}  // namespace

int main(int argc, char** argv) {
    Config cfg;
    try {
        auto path = find_config_arg(argc, argv);
        if (!path.empty()) apply_config(cfg, read_config(path));
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    CLI::App app{"kappa-ASAW exact enumeration, transformations and lace expansion"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    app.add_option("--config", config_path, "flat key=value file mirroring the flags");
    app.add_option("--threads", cfg.threads, "worker threads (ASAW_THREADS takes precedence)");

    auto model_opts = [&](CLI::App* s) {
        s->add_option("--d", cfg.d, "dimension");
        s->add_option("--dist", cfg.dist, "nn or spread:L=<int>,shape=uniform");
        s->add_option("--kappa", cfg.kappa, "attraction strength as p/q");
    };
    auto selftest_flag = [&](CLI::App* s) { s->add_flag("--selftest", cfg.selftest, "run this module's invariant suite"); };

    auto* enumerate = app.add_subcommand("enumerate", "masses c_n, b_n, h_n");
    model_opts(enumerate);
    enumerate->add_option("--max-n", cfg.max_n);
    enumerate->add_option("--class", cfg.klass, "walks|saw|bridges|halfspace|polygons; adds a raw count column");
    enumerate->add_option("--format", cfg.format, "csv|json");
    selftest_flag(enumerate);

    auto* two_point = app.add_subcommand("two-point", "coefficients of G(x) in z");
    model_opts(two_point);
    two_point->add_option("--order", cfg.order);
    selftest_flag(two_point);

    auto* unfold = app.add_subcommand("unfold", "unfolding maps");
    model_opts(unfold);
    selftest_flag(unfold);
    auto* unfold_check = unfold->add_subcommand("check", "exhaustive unfolding property checks");
    unfold_check->add_option("--max-n", cfg.max_n);
    unfold_check->add_option("--delta", cfg.delta, "p/q; default is the largest admissible dyadic");
    auto* unfold_walk = unfold->add_subcommand("walk", "unfold one half-space walk");
    unfold_walk->add_option("--walk", cfg.walk);
    unfold_walk->add_option("--delta", cfg.delta);

    auto* flips = app.add_subcommand("flips", "plaquette flips");
    model_opts(flips);
    selftest_flag(flips);
    flips->add_option("--seed", cfg.seed);
    auto* flips_check = flips->add_subcommand("check", "exhaustive flip properties");
    flips_check->add_option("--max-n", cfg.max_n);
    auto* flips_apply = flips->add_subcommand("apply", "flip one walk through one plaquette");
    flips_apply->add_option("--walk", cfg.walk);
    flips_apply->add_option("--plaquette", cfg.plaquette, "base;i,j with 1-based axes i<j");

    auto* lace = app.add_subcommand("lace", "lace expansion");
    model_opts(lace);
    selftest_flag(lace);
    auto* lace_pi = lace->add_subcommand("pi", "coefficients of pi^(m), or Pi for m = 0");
    lace_pi->add_option("--m", cfg.m);
    lace_pi->add_option("--order", cfg.order);
    auto* lace_verify = lace->add_subcommand("verify", "recursion residual");
    lace_verify->add_option("--order", cfg.order);

    auto* zc = app.add_subcommand("zc", "critical point estimates");
    model_opts(zc);
    zc->add_option("--method", cfg.method, "ratio|lace");
    zc->add_option("--order", cfg.order);
    selftest_flag(zc);

    auto* thresholds = app.add_subcommand("thresholds", "kappa thresholds and default delta");
    model_opts(thresholds);
    selftest_flag(thresholds);

    auto* torus = app.add_subcommand("torus", "torus susceptibility");
    model_opts(torus);
    selftest_flag(torus);
    auto* torus_chi = torus->add_subcommand("chi", "chi on the side-S torus and its derivative bound");
    torus_chi->add_option("--side", cfg.side);
    torus_chi->add_option("--order", cfg.order);

    auto* greens = app.add_subcommand("greens", "random-walk Green function by quadrature");
    model_opts(greens);
    greens->add_option("--mu", cfg.mu);
    greens->add_option("--x", cfg.x, "comma-separated point");
    selftest_flag(greens);

    auto* partitions = app.add_subcommand("partitions", "partitions into distinct parts");
    partitions->add_option("--n", cfg.n);
    selftest_flag(partitions);

    auto* selftest = app.add_subcommand("selftest", "every module suite");
    selftest->add_option("--seed", cfg.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (cfg.threads > 0) set_thread_count(cfg.threads);
    Ctx ctx{cfg};

    try {
        auto need_leaf = [](CLI::App* s) {
            if (s->get_subcommands().empty()) throw UsageError(s->get_name() + " needs a subcommand (see --help)");
            return s->get_subcommands().front();
        };

        if (enumerate->parsed()) {
            if (cfg.selftest) return emit("enumerate --selftest", selftest_enumerate());
            auto P = ctx.params();
            auto filter = parse_filter(cfg.klass);
            auto t = mass_table(P, cfg.max_n, false);
            std::vector<long> counts(static_cast<std::size_t>(cfg.max_n) + 1, 0);
            enumerate_walks(P, cfg.max_n, filter, [&](const Walk& w) { ++counts[static_cast<std::size_t>(w.steps())]; });
            if (cfg.format == "json") {
                json j = envelope("enumerate");
                j["kappa"] = to_string(P.kappa);
                j["class"] = cfg.klass;
                for (int n = 0; n <= cfg.max_n; ++n) {
                    auto un = static_cast<std::size_t>(n);
                    j["rows"].push_back({{"n", n}, {"c_n", to_string(t.c[un])}, {"b_n", to_string(t.b[un])}, {"h_n", to_string(t.h[un])}, {"count", counts[un]}});
                }
                return emit(j);
            }
            if (cfg.format != "csv") throw UsageError("format must be csv or json");
            std::cout << "n,c_n,b_n,h_n," << cfg.klass << "_count\n";
            for (int n = 0; n <= cfg.max_n; ++n) {
                auto un = static_cast<std::size_t>(n);
                std::cout << n << ',' << to_string(t.c[un]) << ',' << to_string(t.b[un]) << ',' << to_string(t.h[un]) << ',' << counts[un] << '\n';
            }
            return 0;
        }

        if (two_point->parsed()) {
            if (cfg.selftest) return emit("two-point --selftest", selftest_two_point());
            auto P = ctx.params();
            json j = envelope("two-point");
            j["kappa"] = to_string(P.kappa);
            j["order"] = cfg.order;
            j["G"] = spatial_json(two_point_coeffs(P, cfg.order));
            return emit(j);
        }

        if (unfold->parsed()) {
            if (cfg.selftest) return emit("unfold --selftest", selftest_unfold());
            auto leaf = need_leaf(unfold);
            auto D = ctx.dist();
            Rational alpha = ModelParams(0, D).alpha();
            Rational delta = ctx.delta(D);
            if (leaf == unfold_check) {
                Rational k = ctx.kappa();
                json j = envelope("unfold check");
                j.update(combine({{"multivalued_unfolding", checks::unfolding_suite(D, cfg.max_n, delta, {Rational(0), k})},
                                  {"classical_preimages", checks::preimage_counts(D, cfg.max_n)},
                                  {"split_map", checks::split_map_suite(D, cfg.max_n, delta)}}));
                return emit(j);
            }
            Walk w = parse_walk(need(cfg.walk, "--walk"));
            auto mv = multivalued_unfold(w, delta, alpha);
            json j = envelope("unfold walk");
            j["delta"] = to_string(delta);
            j["spans"] = mv.unfold.spans;
            j["unfolded"] = mv.unfold.unfolded.str();
            for (const auto& P : mv.unfold.marked_union) j["marked"].push_back(P.str());
            j["k"] = mv.k;
            j["flips"] = mv.flips;
            for (const auto& img : mv.images) j["images"].push_back(img.str());
            return emit(j);
        }

        if (flips->parsed()) {
            if (cfg.selftest) return emit("flips --selftest", selftest_flips(cfg.seed));
            auto leaf = need_leaf(flips);
            auto P = ctx.params();
            if (leaf == flips_check) {
                json j = envelope("flips check");
                j.update(combine({{"flip_suite", checks::flip_suite(P.D, cfg.max_n, {P.kappa})},
                                  {"nonflippable_bound", checks::nonflippable_bound(P.D, cfg.max_n)},
                                  {"greedy_random", checks::greedy_random(P.dim(), 10000, cfg.seed)}}));
                return emit(j);
            }
            Walk w = parse_walk(need(cfg.walk, "--walk"));
            Plaquette Q = parse_plaquette(need(cfg.plaquette, "--plaquette"), w.dim());
            Walk f = flip(Q, w);
            json j = envelope("flips apply");
            j["flippable"] = is_flippable(Q, w);
            j["result"] = f.str();
            j["weight_ratio"] = to_string(asaw_weight(P, f) / asaw_weight(P, w));
            return emit(j);
        }

        if (lace->parsed()) {
            if (cfg.selftest) return emit("lace --selftest", selftest_lace());
            auto leaf = need_leaf(lace);
            auto P = ctx.params();
            if (leaf == lace_pi) {
                json j = envelope("lace pi");
                j["kappa"] = to_string(P.kappa);
                j["m"] = cfg.m;
                j["order"] = cfg.order;
                j["coefficients"] = spatial_json(pi_coeffs(P, cfg.m, cfg.order));
                return emit(j);
            }
            auto r = recursion_residual(P, cfg.order);
            json j = envelope("lace verify");
            j["kappa"] = to_string(P.kappa);
            j["order"] = cfg.order;
            j["all_zero"] = r.is_zero();
            j["max_abs_residual"] = to_string(r.max_abs());
            j["passed"] = r.is_zero();
            if (!r.is_zero()) j["residual"] = spatial_json(r);
            return emit(j);
        }

        if (zc->parsed()) {
            if (cfg.selftest) return emit("zc --selftest", selftest_zc());
            auto P = ctx.params();
            if (cfg.method != "ratio" && cfg.method != "lace") throw UsageError("method must be ratio or lace");
            auto ce = critical_estimates(P, cfg.order);
            json j = envelope("zc");
            j["kappa"] = to_string(P.kappa);
            j["method"] = cfg.method;
            j["order"] = cfg.order;
            if (cfg.method == "ratio") {
                j["zc"] = ce.zc_ratio;
                j["mu_extrapolated"] = ce.mu_extrapolated;
                for (const auto& r : ce.mu_ratio) j["mu_ratio"].push_back(r.get_d());
            } else {
                j["zc"] = ce.zc_lace.get_d();
                j["zc_exact"] = to_string(ce.zc_lace);
                j["pi_order"] = ce.pi_order;
                j["bracket_roots"] = ce.zc_lace_roots;
            }
            j["mu_bridge_lower"] = ce.mu_bridge_lower.get_d();
            j["mu_bridge_lower_exact"] = to_string(ce.mu_bridge_lower);
            return emit(j);
        }

        if (thresholds->parsed()) {
            if (cfg.selftest) return emit("thresholds --selftest", selftest_thresholds());
            auto D = ctx.dist();
            auto t = kappa_thresholds(D);
            ModelParams P0(0, D);
            json j = envelope("thresholds");
            j["distribution"] = D.name();
            j["d"] = D.dim();
            j["p1"] = to_string(D.p1());
            j["k0"] = P0.k0();
            j["alpha"] = to_string(P0.alpha());
            j["kappa_asm"] = to_string(t.kappa_asm);
            j["kappa_asm_float"] = t.kappa_asm.get_d();
            j["delta_default"] = to_string(t.delta_default);
            j["kappa_decay"] = to_string(t.kappa_decay);
            j["kappa_decay_float"] = t.kappa_decay.get_d();
            return emit(j);
        }

        if (torus->parsed()) {
            if (cfg.selftest) return emit("torus --selftest", selftest_torus());
            need_leaf(torus);
            auto P = ctx.params();
            auto r = torus_chi_derivative_check(P, cfg.side, cfg.order, {P.z0(), Rational(1), Rational(3, 2)});
            json j = envelope("torus chi");
            j["kappa"] = to_string(P.kappa);
            j["side"] = cfg.side;
            j["chi"] = series_json(r.chi);
            for (const auto& p : r.points)
                j["points"].push_back({{"z", to_string(p.z)}, {"ratio", to_string(p.ratio)}, {"ratio_float", p.ratio.get_d()},
                                       {"bound", to_string(p.bound)}, {"bound_float", p.bound.get_d()}, {"holds", p.holds}});
            j["passed"] = r.all_hold && r.two_ways_agree;
            return emit(j);
        }

        if (greens->parsed()) {
            if (cfg.selftest) return emit("greens --selftest", selftest_greens());
            auto D = ctx.dist();
            Point x = cfg.x.empty() ? origin(D.dim()) : parse_point(cfg.x, D.dim());
            auto g = green_quadrature(D, cfg.mu, x);
            json j = envelope("greens");
            j["distribution"] = D.name();
            j["mu"] = cfg.mu;
            j["x"] = x.str();
            j["value"] = g.value;
            j["error_proxy"] = g.error_proxy;
            j["method"] = g.method;
            if (cfg.mu == 1.0 && D.dim() > 2 && !x.is_origin()) j["ratio"] = asymptotic_ratio(D, x);
            return emit(j);
        }

        if (partitions->parsed()) {
            if (cfg.selftest) return emit("partitions --selftest", selftest_partitions());
            if (cfg.n < 0) throw UsageError("n must be nonnegative");
            json j = envelope("partitions");
            j["n"] = cfg.n;
            j["P"] = distinct_partitions(cfg.n).get_str();
            if (cfg.n >= 1) j["hardy_ramanujan_deviation"] = hardy_ramanujan_deviation(cfg.n);
            return emit(j);
        }

        if (selftest->parsed()) {
            json j = envelope("selftest");
            j.update(combine({{"enumerate", selftest_enumerate()},
                              {"two_point", selftest_two_point()},
                              {"flips", selftest_flips(cfg.seed)},
                              {"unfold", selftest_unfold()},
                              {"lace", selftest_lace()},
                              {"zc", selftest_zc()},
                              {"thresholds", selftest_thresholds()},
                              {"torus", selftest_torus()},
                              {"greens", selftest_greens()},
                              {"partitions", selftest_partitions()}}));
            return emit(j);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
