#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mobnil/mobnil.hpp"

using namespace mobnil;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kValidation = 1, kRuntime = 2, kSuiteFailure = 3 };

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError(flag + ": \"" + item + "\" is not a number");
        }
    }
    return out;
}

nilflow::HeisII<double> parse_heis(const std::string& text, const std::string& flag) {
    const auto v = parse_list(text, flag);
    if (v.size() != 3) throw ValidationError(flag + " expects three comma-separated coordinates a1,a2,a3");
    return {v[0], v[1], v[2]};
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoError("write to " + path + " failed");
}

struct Global {
    std::string config_path;
    std::string threads;
    std::string seed;
    std::string cache;
    std::string memory_cap;
    std::string format;

    RunConfig resolve() const {
        RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (!threads.empty()) apply_setting(c, "thread_count", threads);
        if (!seed.empty()) apply_setting(c, "seed", seed);
        if (!cache.empty()) apply_setting(c, "cache_path", cache);
        if (!memory_cap.empty()) apply_setting(c, "memory_cap_bytes", memory_cap);
        if (!format.empty()) apply_setting(c, "output_format", format);
        par::set_threads(c.thread_count);
        return c;
    }
};

// Phase flags shared by corr and vaughan.
struct PhaseFlags {
    std::string kind;
    std::optional<double> alpha, beta, gamma;
    std::optional<std::int64_t> q, index;
    std::string values;
    std::string g;
    std::string x = "0,0,0";
    std::string f = "bump3";

    void add(CLI::App* app) {
        app->add_option("--kind", kind, "linear|quadratic|bracket|periodic|character|nilseq")->required();
        app->add_option("--alpha", alpha, "linear, quadratic and bracket coefficient");
        app->add_option("--beta", beta, "quadratic and bracket coefficient");
        app->add_option("--gamma", gamma, "quadratic constant term");
        app->add_option("--q", q, "character modulus");
        app->add_option("--index", index, "character index; all characters when omitted");
        app->add_option("--values", values, "periodic values f(0),...,f(q-1), real");
        app->add_option("--g", g, "nilseq group element a1,a2,a3");
        app->add_option("--x", x, "nilseq base point");
        app->add_option("--f", f, "nilseq function: bump3, bump12 or bump_x3");
    }

    double need(const std::optional<double>& v, const char* flag) const {
        if (!v) throw ValidationError("--kind " + kind + " requires " + flag);
        return *v;
    }

    std::vector<correlate::PhaseSpec> specs() const {
        if (kind == "linear") return {correlate::LinearPhase{need(alpha, "--alpha")}};
        if (kind == "quadratic") {
            return {correlate::QuadraticPhase{need(alpha, "--alpha"), beta.value_or(0.0), gamma.value_or(0.0)}};
        }
        if (kind == "bracket") return {correlate::BracketPhase{need(alpha, "--alpha"), need(beta, "--beta")}};
        if (kind == "periodic") {
            if (values.empty()) throw ValidationError("--kind periodic requires --values");
            correlate::PeriodicPhase p;
            for (double v : parse_list(values, "--values")) p.values.emplace_back(v);
            return {p};
        }
        if (kind == "character") {
            if (!q) throw ValidationError("--kind character requires --q");
            if (index) return {correlate::CharacterPhase{*q, *index}};
            std::vector<correlate::PhaseSpec> out;
            const correlate::CharacterTable table(*q);
            for (std::int64_t i = 0; i < table.count(); ++i) out.push_back(correlate::CharacterPhase{*q, i});
            return out;
        }
        if (kind == "nilseq") {
            if (g.empty()) throw ValidationError("--kind nilseq requires --g a1,a2,a3");
            return {correlate::NilseqPhase{parse_heis(g, "--g"), parse_heis(x, "--x"), f}};
        }
        throw ValidationError("unknown --kind \"" + kind + "\"");
    }
};

std::vector<std::int64_t> parse_n_list(const std::string& text) {
    std::vector<std::int64_t> out;
    for (double v : parse_list(text, "--n")) {
        if (!(v >= 1) || v != std::floor(v)) throw ValidationError("--n entries must be positive integers");
        out.push_back(static_cast<std::int64_t>(v));
    }
    if (out.empty()) throw ValidationError("--n needs at least one value");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mobius correlation experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    Global global;
    app.add_option("--config", global.config_path, "key = value config file");
    app.add_option("--threads", global.threads, "worker count or auto");
    app.add_option("--seed", global.seed, "64-bit seed");
    app.add_option("--cache", global.cache, "Mobius cache path");
    app.add_option("--memory-cap", global.memory_cap, "sieve memory cap in bytes");
    app.add_option("--format", global.format, "csv or json");

    int status = kOk;

    auto* sieve_cmd = app.add_subcommand("sieve", "sieve mu and write the cache");
    std::int64_t sieve_n = 0;
    std::string sieve_out;
    sieve_cmd->add_option("--n-max", sieve_n, "largest n")->required();
    sieve_cmd->add_option("--out", sieve_out, "cache path (defaults to the configured cache)");
    sieve_cmd->callback([&] {
        const RunConfig cfg = global.resolve();
        const std::string path = sieve_out.empty() ? cfg.cache_path : sieve_out;
        if (path.empty()) throw ValidationError("sieve: give --out or a cache path");
        sieve::write_table(sieve::sieve_mobius(sieve_n, cfg.memory_cap_bytes), path);
    });

    auto* corr_cmd = app.add_subcommand("corr", "correlate mu with a phase");
    PhaseFlags corr_phase;
    corr_phase.add(corr_cmd);
    std::string corr_n, corr_out;
    bool corr_timing = false;
    corr_cmd->add_option("--n", corr_n, "comma-separated N values")->required();
    corr_cmd->add_option("--out", corr_out, "output file, stdout by default");
    corr_cmd->add_flag("--timing", corr_timing, "record wall time per row");
    corr_cmd->callback([&] {
        const RunConfig cfg = global.resolve();
        const auto specs = corr_phase.specs();
        const auto ns = parse_n_list(corr_n);
        const auto mu = sieve::load_or_sieve(*std::max_element(ns.begin(), ns.end()), cfg.cache_path, cfg.memory_cap_bytes);
        correlate::CorrelationReport merged;
        for (const auto& spec : specs) {
            auto r = correlate::correlate(mu, spec, ns);
            merged.kind = r.kind;
            merged.rows.insert(merged.rows.end(), r.rows.begin(), r.rows.end());
            if (specs.size() == 1) merged.fit = r.fit;
        }
        std::stable_sort(merged.rows.begin(), merged.rows.end(), [](const auto& a, const auto& b) { return a.N < b.N; });
        emit(cfg.output_format == "json" ? correlate::to_json(merged, corr_timing) : correlate::to_csv(merged, corr_timing),
             corr_out);
    });

    auto* vaughan_cmd = app.add_subcommand("vaughan", "Vaughan decomposition and the Type I / Type II dichotomy");
    PhaseFlags v_phase;
    v_phase.add(vaughan_cmd);
    std::int64_t v_N = 0, v_U = 0, v_V = 0;
    double v_delta = 0.1;
    std::string v_out;
    vaughan_cmd->add_option("--N", v_N, "window (N, 2N]")->required();
    vaughan_cmd->add_option("--U", v_U, "cut U, default floor(N^(1/3))");
    vaughan_cmd->add_option("--V", v_V, "cut V, default floor(N^(1/3))");
    vaughan_cmd->add_option("--delta", v_delta, "largeness threshold");
    vaughan_cmd->add_option("--out", v_out, "output file");
    vaughan_cmd->callback([&] {
        const RunConfig cfg = global.resolve();
        const auto specs = v_phase.specs();
        if (specs.size() != 1) throw ValidationError("vaughan: give a single phase (use --index for characters)");
        auto params = vaughan::VaughanParams::defaults(v_N);
        if (v_U > 0) params.U = v_U;
        if (v_V > 0) params.V = v_V;
        params.validate();
        const auto mu = sieve::load_or_sieve(2 * v_N, cfg.cache_path, cfg.memory_cap_bytes);
        const auto fn = correlate::make_sequence(specs[0]);
        const vaughan::Sequence f = fn;
        const auto dec = vaughan::decompose(f, params, mu);
        const auto dich = vaughan::inverse_dichotomy(f, params, v_delta, mu);
        json j;
        j["N"] = params.N;
        j["U"] = params.U;
        j["V"] = params.V;
        j["lhs"] = {dec.lhs.real(), dec.lhs.imag()};
        j["t_one"] = {dec.t_one.real(), dec.t_one.imag()};
        j["t_two"] = {dec.t_two.real(), dec.t_two.imag()};
        j["residual"] = dec.residual;
        j["large"] = dich.large;
        j["branch"] = vaughan::to_string(dich.branch);
        j["type_i_witnessed"] = dich.type_i_witnessed;
        j["type_ii_witnessed"] = dich.type_ii_witnessed;
        j["skipped_boxes"] = dich.skipped_boxes;
        emit(j.dump(2) + "\n", v_out);
    });

    auto* nil_cmd = app.add_subcommand("nilflow", "orbit of a Heisenberg nilflow in the fundamental domain");
    std::string nil_g, nil_x = "0,0,0", nil_out;
    std::int64_t nil_n = 0;
    nil_cmd->add_option("--g", nil_g, "a1,a2,a3")->required();
    nil_cmd->add_option("--x", nil_x, "base point");
    nil_cmd->add_option("--n", nil_n, "last index")->required();
    nil_cmd->add_option("--out", nil_out, "output file");
    nil_cmd->callback([&] {
        global.resolve();
        if (nil_n < 0) throw ValidationError("--n must be non-negative");
        const auto g = parse_heis(nil_g, "--g");
        nilflow::HeisOrbit walk(g, parse_heis(nil_x, "--x"), 0);
        std::string text = "n,t1,t2,t3\n";
        char buf[128];
        for (std::int64_t n = 0; n <= nil_n; ++n, walk.advance()) {
            const auto p = walk.point();
            std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g\n", static_cast<long long>(n), p.t1, p.t2, p.t3);
            text += buf;
        }
        emit(text, nil_out);
    });

    auto* bohr_cmd = app.add_subcommand("bohr", "enumerate a Bohr set");
    std::string bohr_g, bohr_out;
    std::int64_t bohr_N = 0, bohr_n0 = 0, bohr_lo = 0, bohr_hi = 0, bohr_div = 0;
    double bohr_rho = 0.1;
    bohr_cmd->add_option("--g", bohr_g, "frequencies g1,...,gk")->required();
    bohr_cmd->add_option("--N", bohr_N, "length scale")->required();
    bohr_cmd->add_option("--n0", bohr_n0, "centre");
    bohr_cmd->add_option("--rho", bohr_rho, "radius");
    bohr_cmd->add_option("--lo", bohr_lo, "window start, default -N");
    bohr_cmd->add_option("--hi", bohr_hi, "window end, default N");
    bohr_cmd->add_option("--divisor", bohr_div, "also report the size properties with this divisor");
    bohr_cmd->add_option("--out", bohr_out, "output file");
    bohr_cmd->callback([&] {
        global.resolve();
        phases::BohrSetSpec spec{parse_list(bohr_g, "--g"), bohr_N, bohr_n0, bohr_rho,
                                 {bohr_lo == 0 && bohr_hi == 0 ? -bohr_N : bohr_lo, bohr_lo == 0 && bohr_hi == 0 ? bohr_N : bohr_hi}};
        if (bohr_div > 0) {
            const auto r = phases::bohr_property_report(spec, bohr_div);
            json j{{"size_rho", r.size_rho},           {"size_2rho", r.size_2rho},
                   {"divisible_count", r.divisible_count}, {"ratio_lower", r.ratio_lower},
                   {"ratio_doubling", r.ratio_doubling}, {"ratio_divisible", r.ratio_divisible},
                   {"lower_holds", r.lower_holds},     {"doubling_holds", r.doubling_holds},
                   {"divisible_holds", r.divisible_holds}};
            emit(j.dump(2) + "\n", bohr_out);
            return;
        }
        std::string text = "n\n";
        for (std::int64_t n : phases::bohr_enumerate(spec)) text += std::to_string(n) + "\n";
        emit(text, bohr_out);
    });

    auto* dec_cmd = app.add_subcommand("decompose", "split a nilsequence into locally quadratic pieces");
    std::string dec_g, dec_f = "bump3", dec_out;
    std::int64_t dec_N = 10'000;
    double dec_eps = 0.1;
    dec_cmd->add_option("--g", dec_g, "a1,a2,a3")->required();
    dec_cmd->add_option("--f", dec_f, "bump3, bump12 or bump_x3");
    dec_cmd->add_option("--N", dec_N, "orbit length");
    dec_cmd->add_option("--eps", dec_eps, "target sup error");
    dec_cmd->add_option("--out", dec_out, "output file");
    dec_cmd->callback([&] {
        const RunConfig cfg = global.resolve();
        phases::DecomposeOptions opt;
        opt.seed = cfg.seed;
        const auto d = phases::heis_decompose(phases::builtin_nil_function(dec_f), parse_heis(dec_g, "--g"), dec_N, dec_eps, opt);
        json j;
        j["N"] = d.N;
        j["epsilon"] = d.epsilon;
        j["order"] = d.order;
        j["boxes"] = d.boxes.size();
        j["pieces"] = d.pieces.size();
        j["sup_error"] = d.sup_error;
        j["weight_mean"] = d.weight_mean;
        j["weight_exponent"] = d.weight_exponent;
        j["phases_ok"] = d.phases_ok;
        emit(j.dump(2) + "\n", dec_out);
    });

    auto* check_cmd = app.add_subcommand("check", "run a property suite");
    std::string suite = "all", check_out;
    check_cmd->add_option("--suite", suite, "sieve, circle, nilflow, phases, vaughan, correlate or all");
    check_cmd->add_option("--out", check_out, "output file");
    check_cmd->callback([&] {
        const RunConfig cfg = global.resolve();
        const auto summary = checks::run_suite(suite, cfg.seed);
        emit(summary.to_json(), check_out);
        if (!summary.all_passed()) status = kSuiteFailure;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const ModulusError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return status;
}
