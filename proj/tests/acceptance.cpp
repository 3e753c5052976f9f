// Acceptance suite: one PASS/FAIL line per criterion, full JSON reports on request.

#include <asaw/checks.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>

using namespace asaw;
using checks::json;

namespace {

const StepDistribution& nn2() {
    static const StepDistribution D = make_nearest_neighbour(2);
    return D;
}

const Thresholds& thresholds2() {
    static const Thresholds t = kappa_thresholds(nn2());
    return t;
}

json c1() {
    json a = checks::recursion_identity(nn2(), 8, {Rational(0), Rational(1, 10)});
    json b = checks::recursion_identity(make_spread_out(2, 1), 6, {Rational(1, 10)});
    return json{{"nearest_neighbour", a}, {"spread_out_L1", b}, {"passed", a["passed"].get<bool>() && b["passed"].get<bool>()}};
}

json c2() { return checks::interaction_product_identity(nn2(), 6, {Rational(0), Rational(1, 10), Rational(1, 3)}); }

json c3() { return checks::bridge_supermultiplicativity(nn2(), 12, {Rational(0), Rational(1, 10), Rational(1, 4)}); }

json c4() { return checks::flip_suite(nn2(), 8, {Rational(0), Rational(1, 10)}); }

json c5() { return checks::nonflippable_bound(nn2(), 10); }

json c6() {
    json rnd = checks::greedy_random(2, 10000, 20240601);
    json flips = checks::flip_suite(nn2(), 8, {});
    json nonflip = checks::nonflippable_bound(nn2(), 10);
    const auto& t = thresholds2();
    json unf = checks::unfolding_suite(nn2(), 8, t.delta_default, {});
    bool ok = rnd["passed"].get<bool>() && flips["greedy"]["failures"]["count"] == 0 && nonflip["saws"]["greedy"]["failures"]["count"] == 0 &&
              nonflip["polygons"]["greedy"]["failures"]["count"] == 0 && unf["greedy"]["failures"]["count"] == 0;
    json asm_sets = checks::asm_per_walk(ModelParams(t.kappa_asm / 2, nn2()), 5, 7);
    ok = ok && asm_sets["greedy"]["failures"]["count"] == 0;
    return json{{"random", rnd},
                {"flip_suite_sets", flips["greedy"]},
                {"saw_split_sets", nonflip["saws"]["greedy"]},
                {"polygon_split_sets", nonflip["polygons"]["greedy"]},
                {"unfolding_sets", unf["greedy"]},
                {"memory_sets", asm_sets["greedy"]},
                {"passed", ok}};
}

json c7() {
    const auto& t = thresholds2();
    json unf = checks::unfolding_suite(nn2(), 8, t.delta_default, {Rational(0), t.kappa_decay});
    json pre = checks::preimage_counts(nn2(), 10);
    json split = checks::split_map_suite(nn2(), 8, t.delta_default);
    return json{{"kappa_decay", to_string(t.kappa_decay)},
                {"multivalued_unfolding", unf},
                {"classical_preimages", pre},
                {"split_map", split},
                {"passed", unf["passed"].get<bool>() && pre["passed"].get<bool>() && split["passed"].get<bool>()}};
}

json c8() {
    const auto& t = thresholds2();
    json r = checks::asm_per_walk(ModelParams(t.kappa_asm / 2, nn2()), 5, 7);
    r["kappa_asm"] = to_string(t.kappa_asm);
    return r;
}

json c9() { return checks::diagram_bounds(nn2(), 8, {2, 3}, {Rational(0), Rational(1, 10)}); }

json c10() { return checks::hardy_ramanujan({100, 1000, 10000}); }

json c11() { return checks::torus_bound(nn2(), 3, 8, {Rational(0), thresholds2().kappa_asm / 2}); }

json c12() { return checks::critical_points(ModelParams(0, nn2()), 8); }

json c13() {
    auto box = make_spread_out(5, 3);
    auto nn3 = make_nearest_neighbour(3);
    return checks::srw_asymptotics({{box, Point{10, 0, 0, 0, 0}, 0.2},
                                    {box, Point{15, 0, 0, 0, 0}, 0.2},
                                    {box, Point{20, 0, 0, 0, 0}, 0.2},
                                    {nn3, Point{20, 0, 0}, 0.15}});
}

json c14() {
    json out{{"thread_counts", {1, 4}}, {"reports", json::object()}};
    bool ok = true;
    std::vector<std::pair<std::string, std::function<json()>>> runs = {{"criterion_1", c1}, {"criterion_3", c3}, {"criterion_7", c7}};
    for (const auto& [name, f] : runs) {
        std::vector<std::string> dumps;
        for (int th : {1, 4}) {
            set_thread_count(th);
            dumps.push_back(f().dump());
        }
        set_thread_count(0);
        bool same = dumps[0] == dumps[1];
        ok = ok && same;
        out["reports"][name] = {{"bytes", dumps[0].size()}, {"identical", same}};
    }
    out["passed"] = ok;
    return out;
}

struct Criterion {
    int id;
    const char* title;
    std::function<json()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"asaw acceptance suite"};
    std::vector<int> only;
    std::string report;
    app.add_option("--only", only, "criteria to run (default: all)");
    app.add_option("--report", report, "write the JSON reports to this file");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all = {
        {1, "lace-expansion recursion identity", c1},
        {2, "interaction product equals weight times SAW indicator", c2},
        {3, "bridge supermultiplicativity", c3},
        {4, "flip suite", c4},
        {5, "non-flippable adjacency bound", c5},
        {6, "greedy disjoint selection fraction", c6},
        {7, "unfolding and weight transfer", c7},
        {8, "per-walk averaged submultiplicativity", c8},
        {9, "diagram bounds and lace-edge bound", c9},
        {10, "distinct-partition asymptotics", c10},
        {11, "torus susceptibility derivative bound", c11},
        {12, "critical point cross-validation", c12},
        {13, "random-walk Green function asymptotics", c13},
        {14, "determinism across thread counts", c14},
    };
    std::set<int> want(only.begin(), only.end());
    json reports = json::object();
    int failed = 0;
    for (const auto& c : all) {
        if (!want.empty() && !want.count(c.id)) continue;
        auto t0 = std::chrono::steady_clock::now();
        json r;
        bool pass = false;
        try {
            r = c.run();
            pass = r.at("passed").get<bool>();
        } catch (const std::exception& e) {
            r = json{{"error", e.what()}, {"passed", false}};
        }
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!pass) ++failed;
        std::printf("%s criterion %2d: %s (%.1f s)\n", pass ? "PASS" : "FAIL", c.id, c.title, sec);
        std::fflush(stdout);
        reports[std::to_string(c.id)] = r;
    }
    if (!report.empty()) std::ofstream(report) << reports.dump(2) << '\n';
    return failed == 0 ? 0 : 1;
}
