// Command-line front end: thin adapters over the library workflows.
// Exit codes: 0 success, 2 usage/parse error, 3 size cap exceeded,
// 4 verification found a counterexample.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "bihull/certificates.hpp"
#include "bihull/envelopes.hpp"
#include "bihull/families.hpp"
#include "bihull/lp_format.hpp"
#include "bihull/prng.hpp"
#include "bihull/qp.hpp"
#include "bihull/study.hpp"
#include "bihull/witnesses.hpp"

using namespace bihull;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitTooLarge = 3;
constexpr int kExitCounterexample = 4;

WeightedGraph load_graph(const std::string& path, bool allow_loops = false) {
    std::ifstream in(path);
    if (!in) fail(Errc::IoFailure, "cannot open graph file: " + path);
    return read_edge_list(in, allow_loops);
}

PointX parse_point(const std::string& text, int n) {
    std::istringstream is(text);
    std::vector<Rat> coords;
    std::string tok;
    while (is >> tok) coords.push_back(parse_rational(tok));
    if (static_cast<int>(coords.size()) != n)
        fail(Errc::DimensionMismatch, "point has " + std::to_string(coords.size()) + " coordinates, graph has " +
                                          std::to_string(n) + " vertices");
    return PointX(std::move(coords));
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) fail(Errc::IoFailure, "cannot open output file: " + path);
    return file;
}

std::string witness_to_text(int n, const VertexWitness& w) {
    std::ostringstream os;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (k) os << " + ";
        os << rat_to_string(w[k].second) << "*(";
        for (int i = 0; i < n; ++i) os << ((w[k].first >> i & 1u) ? '1' : '0');
        os << ")";
    }
    return os.str();
}

json witness_to_json(int n, const VertexWitness& w) {
    json arr = json::array();
    for (const auto& [bits, weight] : w) {
        std::string pattern;
        for (int i = 0; i < n; ++i) pattern.push_back((bits >> i & 1u) ? '1' : '0');
        arr.push_back({{"vertex", pattern}, {"weight", rat_to_string(weight)}});
    }
    return arr;
}

struct SystemChoice {
    ConstraintSystem sys;
    std::string description;
};

SystemChoice build_system(const WeightedGraph& g, const std::string& tag, std::optional<int> k,
                          const std::string& drop) {
    if (tag == "kn-minus") {
        auto sys = kn_minus_system(g.n());
        if (!drop.empty()) {
            int family = 0, s = 0;
            if (std::sscanf(drop.c_str(), "family%d:s=%d", &family, &s) != 2)
                fail(Errc::ParseError, "--drop expects familyF:s=S");
            if (!sys.drop_labeled({"clique-minus", {family, s}}))
                fail(Errc::BadIndex, "no such special row: " + drop);
        }
        return {std::move(sys), "kn-minus extension"};
    }
    if (tag == "cycle-theorem") {
        auto sys = ConstraintSystem::over_graph(g, "cycle-theorem");
        for (const auto& e : g.edges()) sys.add_all(mccormick(e.i, e.j));
        for (auto& c : cycle_theorem_pair(g)) sys.add(std::move(c));
        return {std::move(sys), "McCormick + cycle pair"};
    }
    if (tag == "wheel") {
        int n = g.n() - 1;
        auto sys = ConstraintSystem::over_graph(g, "wheel");
        for (const auto& e : g.edges()) sys.add_all(mccormick(e.i, e.j));
        for (auto& c : wheel_inequalities(n)) sys.add(std::move(c));
        return {std::move(sys), "McCormick + wheel rows"};
    }
    return {relaxation_system(g, parse_class_tag(tag), k), "relaxation class " + tag};
}

int cmd_envelope(const std::string& graph_path, const std::string& point_text, int cap, const std::string& format,
                 const std::string& out_path) {
    auto g = load_graph(graph_path);
    auto x = parse_point(point_text, g.n());
    EnvelopeOptions opts{cap};
    auto res = envelope(g, x, opts);
    std::ofstream file;
    auto& os = open_out(file, out_path);
    if (format == "json") {
        json j{{"vex", rat_to_string(res.vex)},
               {"cav", rat_to_string(res.cav)},
               {"vex_witness", witness_to_json(g.n(), res.vex_witness)},
               {"cav_witness", witness_to_json(g.n(), res.cav_witness)}};
        os << j.dump(2) << "\n";
    } else {
        os << "vex=" << rat_to_string(res.vex) << " cav=" << rat_to_string(res.cav) << "\n";
        os << "vex witness: " << witness_to_text(g.n(), res.vex_witness) << "\n";
        os << "cav witness: " << witness_to_text(g.n(), res.cav_witness) << "\n";
    }
    return kExitOk;
}

int cmd_verify(const std::string& graph_path, const std::string& tag, std::optional<int> k, const std::string& drop,
               int samples, std::uint64_t seed, int cap, std::uint64_t denominator, const std::string& format,
               const std::string& out_path) {
    auto g = load_graph(graph_path);
    auto choice = build_system(g, tag, k, drop);
    Prng rng(seed);
    std::vector<PointX> points;
    for (int i = 0; i < samples; ++i)
        points.push_back(PointX(rng.rational_point(static_cast<std::size_t>(g.n()), denominator)));
    // a dropped row is probed at its witness point as well
    if (!drop.empty()) {
        int family = 0, s = 0;
        std::sscanf(drop.c_str(), "family%d:s=%d", &family, &s);
        points.push_back(minimality_witness(g.n(), family, s).x);
    }
    auto rep = verify_extension(g, choice.sys, points, EnvelopeOptions{cap});
    std::ofstream file;
    auto& os = open_out(file, out_path);
    if (format == "json") {
        json j{{"system", choice.sys.name()}, {"samples", rep.checked}, {"pass", rep.pass}};
        if (!rep.pass) {
            json xj = json::array();
            for (const auto& c : rep.failed_x->x) xj.push_back(rat_to_string(c));
            j["counterexample"] = {{"index", *rep.failed_index}, {"x", xj}, {"detail", rep.detail}};
        }
        os << j.dump(2) << "\n";
    } else if (rep.pass) {
        os << "pass: " << choice.description << " exact on " << rep.checked << " samples\n";
    } else {
        os << "FAIL at sample " << *rep.failed_index << ": " << rep.detail << "\n";
        os << "x =";
        for (const auto& c : rep.failed_x->x) os << " " << rat_to_string(c);
        os << "\n";
    }
    return rep.pass ? kExitOk : kExitCounterexample;
}

int cmd_cuts(const std::string& graph_path, const std::string& tag, std::optional<int> k, const std::string& out_path) {
    auto g = load_graph(graph_path);
    auto choice = build_system(g, tag, k, "");
    std::map<std::pair<int, int>, Rat> obj;
    for (const auto& e : g.edges()) obj[{e.i, e.j}] += e.weight;
    std::ofstream file;
    auto& os = open_out(file, out_path);
    write_lp_file(os, to_lp_file(choice.sys, obj));
    return kExitOk;
}

int cmd_certify_check(const std::string& graph_path, const std::string& cert_path, int cap,
                      const std::string& out_path) {
    auto g = load_graph(graph_path);
    std::ifstream in(cert_path);
    if (!in) fail(Errc::IoFailure, "cannot open certificate file: " + cert_path);
    auto sets = read_certificate(in);
    if (static_cast<int>(sets.size()) != g.n()) fail(Errc::DimensionMismatch, "certificate size != vertex count");
    std::vector<Rat> coords;
    for (const auto& s : sets) coords.push_back(s.measure());
    PointX x(std::move(coords));
    Rat value = certificate_value(sets, g);
    auto [lo, wl] = vex_exact(g, x, EnvelopeOptions{cap});
    auto [hi, wh] = cav_exact(g, x, EnvelopeOptions{cap});
    (void)wl;
    (void)wh;
    std::ofstream file;
    auto& os = open_out(file, out_path);
    os << "x =";
    for (int i = 1; i <= g.n(); ++i) os << " " << rat_to_string(x[i]);
    os << "\nvalue = " << rat_to_string(value) << "  vex = " << rat_to_string(lo) << "  cav = " << rat_to_string(hi)
       << "\n";
    bool ok = lo <= value && value <= hi;
    os << (ok ? "pass: value lies between the envelopes\n" : "FAIL: value escapes the envelope band\n");
    return ok ? kExitOk : kExitCounterexample;
}

int cmd_certify_emit(const std::string& graph_path, const std::string& kind, const std::string& point_text,
                     const std::string& out_path) {
    auto g = load_graph(graph_path);
    auto x = parse_point(point_text, g.n());
    std::vector<IntervalSet> sets;
    if (kind == "clique") {
        sets = clique_construction(x.x);
    } else if (kind == "knminus") {
        sets = kn_minus_construction(x.x).sets;
    } else if (kind == "cycle") {
        sets = cycle_construction(g, x).sets;
    } else {
        fail(Errc::ParseError, "--emit expects clique, knminus or cycle");
    }
    std::ofstream file;
    auto& os = open_out(file, out_path);
    write_certificate(os, sets);
    return kExitOk;
}

int cmd_study(const std::string& config_path, const std::string& out_prefix, int jobs) {
    std::ifstream in(config_path);
    if (!in) fail(Errc::IoFailure, "cannot open config file: " + config_path);
    json j = json::parse(in, nullptr, true, true);
    StudyConfig cfg;
    cfg.n = j.at("n").get<int>();
    cfg.p = j.at("p").get<double>();
    cfg.samples = j.at("samples").get<int>();
    cfg.graphs = j.at("graphs").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("denominator")) cfg.denominator = j.at("denominator").get<std::uint64_t>();
    if (j.contains("envelope_cap")) cfg.envelope_cap = j.at("envelope_cap").get<int>();
    cfg.jobs = jobs;
    for (const auto& tag : j.at("classes")) {
        std::string t = tag.get<std::string>();
        ClassSpec spec;
        auto underscore = t.find('_');
        if (underscore != std::string::npos) {
            spec.cls = parse_class_tag(t.substr(0, underscore));
            spec.k = std::stoi(t.substr(underscore + 1));
        } else {
            spec.cls = parse_class_tag(t);
        }
        cfg.classes.push_back(spec);
    }
    if (cfg.classes.empty()) fail(Errc::BadClass, "config lists no classes");

    auto res = run_gap_study(cfg);
    if (out_prefix.empty()) {
        write_study_csv(std::cout, res);
    } else {
        std::ofstream csv(out_prefix + ".csv");
        if (!csv) fail(Errc::IoFailure, "cannot write " + out_prefix + ".csv");
        write_study_csv(csv, res);
        std::ofstream dat(out_prefix + ".dat");
        if (!dat) fail(Errc::IoFailure, "cannot write " + out_prefix + ".dat");
        write_study_dat(dat, res);
    }
    std::cerr << "degenerate samples skipped: " << res.degenerate_samples
              << ", sandwich violations: " << res.sandwich_violations << "\n";
    return res.sandwich_violations == 0 ? kExitOk : kExitCounterexample;
}

int cmd_relax(const std::string& instance_path, const std::string& mode, const std::string& curve_spec,
              std::uint64_t seed, const std::string& out_path) {
    std::ifstream in(instance_path);
    if (!in) fail(Errc::IoFailure, "cannot open instance file: " + instance_path);
    auto inst = read_qp_instance(in);
    std::ofstream file;
    auto& os = open_out(file, out_path);
    if (!curve_spec.empty()) {
        std::vector<double> fractions;
        std::stringstream ss(curve_spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) fractions.push_back(std::stod(tok));
        auto curve = triangle_sampling_curve(inst, fractions, seed);
        os << "fraction,triangles,bound,solve_seconds\n";
        for (const auto& pt : curve) {
            char frac_buf[32], time_buf[32];
            std::snprintf(frac_buf, sizeof frac_buf, "%.2f", pt.fraction);
            std::snprintf(time_buf, sizeof time_buf, "%.6f", pt.solve_seconds);
            os << frac_buf << "," << pt.triangles_used << "," << rat_to_string(pt.bound) << "," << time_buf << "\n";
        }
        return kExitOk;
    }
    if (mode == "convexify") {
        emit_qp_convexification(inst, os);
    } else if (mode == "linearize") {
        auto p = build_qp_linearization(inst);
        write_lp_file(os, to_lp_file(p, {"linearized relaxation"}));
    } else {
        fail(Errc::ParseError, "--mode expects linearize or convexify");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polyhedral relaxations and exact certificates for bilinear functions over [0,1]^n"};
    app.require_subcommand(1);

    std::string graph_path, point_text, out_path, format = "text", tag, drop, cert_path, emit_kind, config_path,
                instance_path, mode = "linearize", curve_spec;
    int cap = 16, samples = 100, k_value = 0, jobs = 1;
    std::uint64_t seed = 1, denominator = 64;
    bool have_k = false;

    auto* env = app.add_subcommand("envelope", "exact vex/cav with convex-combination witnesses");
    env->add_option("--graph", graph_path, "edge-list file")->required();
    env->add_option("--point", point_text, "space-separated coordinates")->required();
    env->add_option("--cap", cap, "largest admissible n");
    env->add_option("--format", format, "text or json");
    env->add_option("--out", out_path, "output file (default stdout)");

    auto* ver = app.add_subcommand("verify", "check LB=vex and UB=cav for a named system on random samples");
    ver->add_option("--graph", graph_path)->required();
    ver->add_option("--system", tag, "m|mt|mq|mc|mg|mo|kn-minus|cycle-theorem|wheel")->required();
    ver->add_option("--k", k_value, "class subscript")->each([&have_k](const std::string&) { have_k = true; });
    ver->add_option("--drop", drop, "familyF:s=S (kn-minus only)");
    ver->add_option("--samples", samples);
    ver->add_option("--seed", seed);
    ver->add_option("--cap", cap);
    ver->add_option("--denominator", denominator, "sample coordinate denominator");
    ver->add_option("--format", format);
    ver->add_option("--out", out_path);

    auto* cuts = app.add_subcommand("cuts", "write a relaxation system as an LP file");
    cuts->add_option("--graph", graph_path)->required();
    cuts->add_option("--system", tag)->required();
    cuts->add_option("--k", k_value)->each([&have_k](const std::string&) { have_k = true; });
    cuts->add_option("--out", out_path);

    auto* cert = app.add_subcommand("certify", "check or emit interval certificates");
    cert->add_option("--graph", graph_path)->required();
    cert->add_option("--certificate", cert_path, "certificate file to check");
    cert->add_option("--emit", emit_kind, "clique|knminus|cycle construction to emit");
    cert->add_option("--point", point_text, "coordinates for --emit");
    cert->add_option("--cap", cap);
    cert->add_option("--out", out_path);

    auto* study = app.add_subcommand("study", "random-graph gap study from a JSON config");
    study->add_option("--config", config_path)->required();
    study->add_option("--out", out_path, "output prefix for .csv and .dat");
    study->add_option("--jobs", jobs, "parallel workers across graphs");

    auto* relax = app.add_subcommand("relax", "linearize or convexify a QP/QCQP instance");
    relax->add_option("--instance", instance_path)->required();
    relax->add_option("--mode", mode, "linearize (default) or convexify");
    relax->add_option("--curve", curve_spec, "comma-separated triangle fractions");
    relax->add_option("--seed", seed);
    relax->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (env->parsed()) return cmd_envelope(graph_path, point_text, cap, format, out_path);
        if (ver->parsed())
            return cmd_verify(graph_path, tag, have_k ? std::optional<int>(k_value) : std::nullopt, drop, samples,
                              seed, cap, denominator, format, out_path);
        if (cuts->parsed())
            return cmd_cuts(graph_path, tag, have_k ? std::optional<int>(k_value) : std::nullopt, out_path);
        if (cert->parsed()) {
            if (!cert_path.empty()) return cmd_certify_check(graph_path, cert_path, cap, out_path);
            if (!emit_kind.empty()) return cmd_certify_emit(graph_path, emit_kind, point_text, out_path);
            fail(Errc::ParseError, "certify needs --certificate or --emit");
        }
        if (study->parsed()) return cmd_study(config_path, out_path, jobs);
        if (relax->parsed()) return cmd_relax(instance_path, mode, curve_spec, seed, out_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == Errc::TooLarge ? kExitTooLarge : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
