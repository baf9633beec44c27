#ifndef TAUSPECTRA_CLI_HPP
#define TAUSPECTRA_CLI_HPP

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tauspectra/asymptotics.hpp"
#include "tauspectra/common.hpp"
#include "tauspectra/diffusion.hpp"
#include "tauspectra/kron.hpp"
#include "tauspectra/markov.hpp"
#include "tauspectra/solve.hpp"
#include "tauspectra/tau_matrix.hpp"
#include "tauspectra/wealth.hpp"

namespace tauspectra {
namespace cli {

/// Input file violated the expected schema; `path` names the offending field.
class schema_error : public error {
public:
    schema_error(const std::string& path, const std::string& what)
        : error("schema error at " + path + ": " + what), path(path) {}
    std::string path;
};

/// Numbers are always printed with 17 significant digits so binary64 values
/// round-trip exactly and identical invocations are byte-identical.
inline std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
inline std::string fmt_real(long double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17Lg", v);
    return buf;
}

inline std::string json_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

template <class Real>
std::string json_array(const std::vector<Real>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out.push_back(',');
        out += fmt_real(v[i]);
    }
    out.push_back(']');
    return out;
}

inline std::string json_array_int(const std::vector<int>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out.push_back(',');
        out += std::to_string(v[i]);
    }
    out.push_back(']');
    return out;
}

// ---------------------------------------------------------------------------
// spec file loading

template <class Real>
struct loaded_spec {
    diffusion_spec<Real> spec;
    std::optional<payoff_tensor<Real>> payoff;
};

inline nlohmann::json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw schema_error("<file>", "cannot open '" + path + "'");
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw schema_error("<file>", "not valid JSON");
    return j;
}

inline double require_number(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number()) throw schema_error(path, "expected a number");
    return j.get<double>();
}

inline int require_int(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number_integer()) throw schema_error(path, "expected an integer");
    return j.get<int>();
}

/// Schema: {axes:[{n, mu, sigma2, delta?}...], payoff?: {kind:"linear",
/// weights:[...]} | {kind:"tensor", values:[...]}}; a missing delta means
/// 1/(n-1).
template <class Real>
loaded_spec<Real> load_spec(const nlohmann::json& j) {
    loaded_spec<Real> out;
    if (!j.is_object()) throw schema_error("<root>", "expected an object");
    if (!j.contains("axes")) throw schema_error("axes", "missing");
    const auto& axes = j.at("axes");
    if (!axes.is_array() || axes.empty()) throw schema_error("axes", "expected a non-empty array");
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const std::string base = "axes[" + std::to_string(i) + "]";
        const auto& a = axes.at(i);
        if (!a.is_object()) throw schema_error(base, "expected an object");
        for (const auto& [key, value] : a.items()) {
            (void)value;
            if (key != "n" && key != "mu" && key != "sigma2" && key != "delta")
                throw schema_error(base + "." + key, "unknown field");
        }
        if (!a.contains("n")) throw schema_error(base + ".n", "missing");
        if (!a.contains("mu")) throw schema_error(base + ".mu", "missing");
        if (!a.contains("sigma2")) throw schema_error(base + ".sigma2", "missing");
        const int n = require_int(a.at("n"), base + ".n");
        if (n < 2) throw schema_error(base + ".n", "must be >= 2");
        const Real mu = Real(require_number(a.at("mu"), base + ".mu"));
        const Real sigma2 = Real(require_number(a.at("sigma2"), base + ".sigma2"));
        if (!(sigma2 > Real(0))) throw schema_error(base + ".sigma2", "must be positive");
        if (a.contains("delta")) {
            const Real delta = Real(require_number(a.at("delta"), base + ".delta"));
            if (!(delta > Real(0))) throw schema_error(base + ".delta", "must be positive");
            out.spec.axes.push_back(diffusion_axis<Real>(n, mu, sigma2, delta));
        } else {
            out.spec.axes.push_back(diffusion_axis<Real>(n, mu, sigma2));
        }
    }
    if (j.contains("payoff")) {
        const auto& p = j.at("payoff");
        if (!p.is_object()) throw schema_error("payoff", "expected an object");
        if (!p.contains("kind")) throw schema_error("payoff.kind", "missing");
        const std::string kind = p.at("kind").is_string() ? p.at("kind").get<std::string>() : "";
        if (kind == "linear") {
            if (!p.contains("weights") || !p.at("weights").is_array())
                throw schema_error("payoff.weights", "expected an array");
            std::vector<Real> w;
            for (std::size_t i = 0; i < p.at("weights").size(); ++i)
                w.push_back(Real(require_number(p.at("weights").at(i),
                                                "payoff.weights[" + std::to_string(i) + "]")));
            if (w.size() != out.spec.axes.size())
                throw schema_error("payoff.weights", "expected one weight per axis");
            out.payoff = linear_payoff(out.spec, w);
        } else if (kind == "tensor") {
            if (!p.contains("values") || !p.at("values").is_array())
                throw schema_error("payoff.values", "expected an array");
            payoff_tensor<Real> w;
            w.dims = out.spec.space().dims;
            w.description = "tensor";
            for (std::size_t i = 0; i < p.at("values").size(); ++i)
                w.values.push_back(Real(require_number(p.at("values").at(i),
                                                       "payoff.values[" + std::to_string(i) + "]")));
            if (w.values.size() != out.spec.space().size())
                throw schema_error("payoff.values",
                                   "expected " + std::to_string(out.spec.space().size()) +
                                       " values for this lattice");
            out.payoff = std::move(w);
        } else {
            throw schema_error("payoff.kind", "expected \"linear\" or \"tensor\"");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// option structs shared between parse and execution

struct options {
    std::string format = "csv";
    std::string out_path;

    // eig
    int n = 0;
    double eps = 0, phi = 0;
    bool closed_form_only = false;
    bool no_vectors = false;

    // tables
    int which = 1;
    std::string n_list = "8,16,32,64,128";

    // queue / walk
    double lambda = 0, mu = 0, p = 0, q = 0;
    std::string evolve_times;
    int start_state = 1;

    // spec-file commands
    std::string spec_path;
    std::string p0 = "point:1";
    std::string times;
    bool emit_dp = false;
    std::string param;
    std::string grid;

    std::string command;
    std::string sub; // diffusion subcommand
};

inline std::vector<double> parse_real_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw invalid_argument_error(what + ": cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty()) throw invalid_argument_error(what + ": empty list");
    return out;
}

inline std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    for (double v : parse_real_list(text, what)) {
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v)
            throw invalid_argument_error(what + ": expected integers");
        out.push_back(i);
    }
    return out;
}

/// Grid syntax: either "a,b,c" or "start:stop:count" (inclusive linspace).
inline std::vector<double> parse_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_real_list(text, "--grid");
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw invalid_argument_error("--grid: expected start:stop:count");
    double a, b;
    int k;
    try {
        a = std::stod(parts[0]);
        b = std::stod(parts[1]);
        k = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw invalid_argument_error("--grid: cannot parse start:stop:count");
    }
    if (k < 1) throw invalid_argument_error("--grid: count must be >= 1");
    std::vector<double> out;
    for (int j = 0; j < k; ++j)
        out.push_back(k == 1 ? a : a + (b - a) * static_cast<double>(j) / static_cast<double>(k - 1));
    return out;
}

// ---------------------------------------------------------------------------
// command implementations (templated on the arithmetic type)

template <class Real>
void run_eig(const options& opt, std::ostream& os) {
    const tau_params<Real> params{opt.n, Real(opt.eps), Real(opt.phi)};
    spectral_decomposition<Real> dec;
    if (opt.closed_form_only) {
        auto cf = closed_form(params);
        if (!cf)
            throw invalid_argument_error("eig: no closed form for these parameters; rerun without --closed-form");
        dec = std::move(*cf);
    } else {
        dec = solve(params);
    }
    if (opt.format == "json") {
        os << "{\"params\":{\"n\":" << params.n << ",\"eps\":" << fmt_real(params.eps)
           << ",\"phi\":" << fmt_real(params.phi) << "},\"pairs\":[";
        for (std::size_t i = 0; i < dec.pairs.size(); ++i) {
            const auto& pr = dec.pairs[i];
            if (i) os << ',';
            os << "{\"lambda\":" << fmt_real(pr.lambda) << ",\"branch\":"
               << json_quote(branch_name(pr.branch)) << ",\"theta\":"
               << (pr.theta ? fmt_real(*pr.theta) : std::string("null"));
            if (!opt.no_vectors) os << ",\"vector\":" << json_array(pr.vector);
            os << '}';
        }
        os << "]}\n";
    } else {
        os << "lambda,branch,theta\n";
        for (const auto& pr : dec.pairs)
            os << fmt_real(pr.lambda) << ',' << branch_name(pr.branch) << ','
               << (pr.theta ? fmt_real(*pr.theta) : std::string("")) << '\n';
    }
}

template <class Real>
void run_tables(const options& opt, std::ostream& os) {
    Real eps, phi;
    switch (opt.which) {
        case 1: eps = Real(3); phi = Real(0.5); break;
        case 2: eps = Real(4); phi = Real(-2); break;
        case 3: eps = Real(8) / Real(5); phi = Real(8) / Real(5); break;
        default: throw invalid_argument_error("tables: --which must be 1, 2 or 3");
    }
    const auto ns = parse_int_list(opt.n_list, "--n");
    const Real floor_at = Real(1e-14);
    struct row {
        int n;
        Real outlier, abs_error, proj_residual;
        symmetry sym;
    };
    std::vector<row> rows;
    for (int n : ns) {
        const auto rep = validation_row(tau_params<Real>{n, eps, phi});
        for (const auto& e : rep.entries)
            rows.push_back({n, e.computed, std::max(e.abs_error, floor_at),
                            std::max(e.projection_residual, floor_at), e.sym_class});
    }
    if (opt.format == "json") {
        os << '[';
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i) os << ',';
            os << "{\"n\":" << rows[i].n << ",\"outlier\":" << fmt_real(rows[i].outlier)
               << ",\"abs_error\":" << fmt_real(rows[i].abs_error)
               << ",\"projection_residual\":" << fmt_real(rows[i].proj_residual)
               << ",\"symmetry\":" << json_quote(symmetry_name(rows[i].sym)) << '}';
        }
        os << "]\n";
    } else {
        const bool with_sym = opt.which == 3;
        os << "n,outlier,abs_error,projection_residual" << (with_sym ? ",symmetry" : "") << '\n';
        for (const auto& r : rows) {
            os << r.n << ',' << fmt_real(r.outlier) << ',' << fmt_real(r.abs_error) << ','
               << fmt_real(r.proj_residual);
            if (with_sym) os << ',' << symmetry_name(r.sym);
            os << '\n';
        }
    }
}

template <class Real>
void emit_1d_report(const spectrum_report<Real>& rep, const options& opt, std::ostream& os,
                    const std::string& name) {
    const auto& ax = rep.axes.front();
    std::vector<Real> p0;
    std::vector<Real> times;
    if (!opt.evolve_times.empty()) {
        for (double t : parse_real_list(opt.evolve_times, "--evolve")) times.push_back(Real(t));
        p0.assign(static_cast<std::size_t>(ax.n), Real(0));
        if (opt.start_state < 1 || opt.start_state > ax.n)
            throw invalid_argument_error(name + ": --start out of range");
        p0[static_cast<std::size_t>(opt.start_state - 1)] = Real(1);
    }
    if (opt.format == "json") {
        os << "{\"n\":" << ax.n << ",\"eigenvalues\":" << json_array(ax.eigenvalues)
           << ",\"gap\":" << fmt_real(rep.gap)
           << ",\"probabilistic\":" << (rep.probabilistic ? "true" : "false");
        if (rep.probabilistic) os << ",\"steady_state\":" << json_array(rep.steady_state);
        if (!times.empty()) {
            os << ",\"trajectory\":[";
            for (std::size_t i = 0; i < times.size(); ++i) {
                if (i) os << ',';
                os << "{\"t\":" << fmt_real(times[i])
                   << ",\"p\":" << json_array(transient_evolve(rep, p0, times[i])) << '}';
            }
            os << ']';
        }
        os << "}\n";
        return;
    }
    if (!times.empty()) {
        os << 't';
        for (int i = 1; i <= ax.n; ++i) os << ",p_" << i;
        os << '\n';
        for (Real t : times) {
            const auto pt = transient_evolve(rep, p0, t);
            os << fmt_real(t);
            for (Real v : pt) os << ',' << fmt_real(v);
            os << '\n';
        }
        return;
    }
    if (!rep.probabilistic)
        throw invalid_argument_error(
            name + ": steady state is not a probability distribution for these rates; use --format json");
    os << "state,steady_state\n";
    for (int i = 0; i < ax.n; ++i)
        os << (i + 1) << ',' << fmt_real(rep.steady_state[static_cast<std::size_t>(i)]) << '\n';
}

template <class Real>
void run_queue(const options& opt, std::ostream& os) {
    const birth_death_params<Real> params{opt.n, Real(opt.lambda), Real(opt.mu)};
    emit_1d_report(queue_spectrum(params), opt, os, "queue");
}

template <class Real>
void run_walk(const options& opt, std::ostream& os) {
    const random_walk_params<Real> params{opt.n, Real(opt.p), Real(opt.q)};
    for (double t : opt.evolve_times.empty() ? std::vector<double>{}
                                             : parse_real_list(opt.evolve_times, "--evolve"))
        if (t != static_cast<long long>(t) || t < 0)
            throw invalid_argument_error("walk: --evolve expects nonnegative integer step counts");
    emit_1d_report(walk_spectrum(params), opt, os, "walk");
}

template <class Real>
void emit_tensor_csv(const multi_index_space& space, const std::vector<Real>& v,
                     const std::string& value_name, std::ostream& os) {
    for (int r = 1; r <= space.rank(); ++r) os << 'i' << r << ',';
    os << value_name << '\n';
    for (std::size_t flat = 0; flat < space.size(); ++flat) {
        const auto idx = lex_delinearize(space, flat);
        for (int i : idx) os << i << ',';
        os << fmt_real(v[flat]) << '\n';
    }
}

template <class Real>
void run_kron(const options& opt, std::ostream& os) {
    const auto j = parse_json_file(opt.spec_path);
    if (!j.is_object()) throw schema_error("<root>", "expected an object");
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw schema_error("kind", "expected \"chain\" or \"generator\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (!j.contains("axes") || !j.at("axes").is_array() || j.at("axes").empty())
        throw schema_error("axes", "expected a non-empty array");
    spectrum_report<Real> rep;
    if (kind == "chain") {
        std::vector<random_walk_params<Real>> axes;
        for (std::size_t i = 0; i < j.at("axes").size(); ++i) {
            const std::string base = "axes[" + std::to_string(i) + "]";
            const auto& a = j.at("axes").at(i);
            if (!a.contains("n") || !a.contains("p") || !a.contains("q"))
                throw schema_error(base, "chain axes need fields n, p, q");
            axes.push_back({require_int(a.at("n"), base + ".n"),
                            Real(require_number(a.at("p"), base + ".p")),
                            Real(require_number(a.at("q"), base + ".q"))});
        }
        rep = kron_spectrum(axes);
    } else if (kind == "generator") {
        std::vector<birth_death_params<Real>> axes;
        for (std::size_t i = 0; i < j.at("axes").size(); ++i) {
            const std::string base = "axes[" + std::to_string(i) + "]";
            const auto& a = j.at("axes").at(i);
            if (!a.contains("n") || !a.contains("lambda") || !a.contains("mu"))
                throw schema_error(base, "generator axes need fields n, lambda, mu");
            axes.push_back({require_int(a.at("n"), base + ".n"),
                            Real(require_number(a.at("lambda"), base + ".lambda")),
                            Real(require_number(a.at("mu"), base + ".mu"))});
        }
        rep = kron_spectrum(axes);
    } else {
        throw schema_error("kind", "expected \"chain\" or \"generator\"");
    }
    if (opt.format == "json") {
        os << "{\"kind\":" << json_quote(kind) << ",\"dims\":" << json_array_int(rep.space.dims)
           << ",\"eigenvalues\":" << json_array(all_eigenvalues(rep))
           << ",\"gap\":" << fmt_real(rep.gap)
           << ",\"probabilistic\":" << (rep.probabilistic ? "true" : "false");
        if (rep.probabilistic) os << ",\"steady_state\":" << json_array(rep.steady_state);
        os << "}\n";
    } else {
        if (!rep.probabilistic)
            throw invalid_argument_error("kron: steady state not defined for these rates; use --format json");
        emit_tensor_csv(rep.space, rep.steady_state, "p", os);
    }
}

template <class Real>
std::vector<Real> parse_p0(const std::string& text, std::size_t total) {
    std::vector<Real> p0;
    if (text == "uniform") {
        p0.assign(total, Real(1) / Real(total));
    } else if (text.rfind("point:", 0) == 0) {
        std::size_t idx = 0;
        try {
            idx = static_cast<std::size_t>(std::stoull(text.substr(6)));
        } catch (const std::exception&) {
            throw invalid_argument_error("--p0 point:<k> needs a 1-based flat index");
        }
        if (idx < 1 || idx > total) throw invalid_argument_error("--p0 point index out of range");
        p0.assign(total, Real(0));
        p0[idx - 1] = Real(1);
    } else {
        for (double v : parse_real_list(text, "--p0")) p0.push_back(Real(v));
        if (p0.size() != total)
            throw invalid_argument_error("--p0: expected " + std::to_string(total) + " entries");
    }
    return p0;
}

template <class Real>
void run_diffusion(const options& opt, std::ostream& os) {
    const auto loaded = load_spec<Real>(parse_json_file(opt.spec_path));
    const auto& spec = loaded.spec;
    const auto space = spec.space();
    if (opt.sub == "steady") {
        const auto p = diffusion_steady_state(spec);
        if (opt.format == "json")
            os << "{\"dims\":" << json_array_int(space.dims)
               << ",\"steady_state\":" << json_array(p) << "}\n";
        else
            emit_tensor_csv(space, p, "p", os);
    } else if (opt.sub == "gap") {
        const Real nu = diffusion_gap(spec);
        if (opt.format == "json")
            os << "{\"gap\":" << fmt_real(nu) << "}\n";
        else
            os << "gap\n" << fmt_real(nu) << '\n';
    } else if (opt.sub == "spectrum") {
        const auto rep = diffusion_spectrum(spec);
        const auto vals = all_eigenvalues(rep);
        if (opt.format == "json") {
            os << "{\"dims\":" << json_array_int(space.dims)
               << ",\"eigenvalues\":" << json_array(vals) << "}\n";
        } else {
            for (int r = 1; r <= space.rank(); ++r) os << 'k' << r << ',';
            os << "nu\n";
            for (std::size_t flat = 0; flat < vals.size(); ++flat) {
                const auto idx = lex_delinearize(space, flat);
                for (int i : idx) os << (i - 1) << ',';
                os << fmt_real(vals[flat]) << '\n';
            }
        }
    } else if (opt.sub == "evolve") {
        if (opt.times.empty()) throw invalid_argument_error("diffusion evolve: --t is required");
        const auto rep = diffusion_spectrum(spec);
        const auto p0 = parse_p0<Real>(opt.p0, space.size());
        std::vector<Real> times;
        for (double t : parse_real_list(opt.times, "--t")) times.push_back(Real(t));
        if (opt.format == "json") {
            os << "{\"dims\":" << json_array_int(space.dims) << ",\"trajectory\":[";
            for (std::size_t i = 0; i < times.size(); ++i) {
                if (i) os << ',';
                os << "{\"t\":" << fmt_real(times[i])
                   << ",\"p\":" << json_array(transient_evolve(rep, p0, times[i])) << '}';
            }
            os << "]}\n";
        } else {
            os << "t,";
            for (int r = 1; r <= space.rank(); ++r) os << 'i' << r << ',';
            os << "p\n";
            for (Real t : times) {
                const auto pt = transient_evolve(rep, p0, t);
                for (std::size_t flat = 0; flat < pt.size(); ++flat) {
                    os << fmt_real(t) << ',';
                    for (int i : lex_delinearize(space, flat)) os << i << ',';
                    os << fmt_real(pt[flat]) << '\n';
                }
            }
        }
    } else {
        throw invalid_argument_error("diffusion: unknown subcommand");
    }
}

template <class Real>
const payoff_tensor<Real>& require_payoff(const loaded_spec<Real>& loaded) {
    if (!loaded.payoff)
        throw schema_error("payoff", "this command needs a payoff in the spec file");
    return *loaded.payoff;
}

template <class Real>
void run_moments(const options& opt, std::ostream& os) {
    const auto loaded = load_spec<Real>(parse_json_file(opt.spec_path));
    const auto& w = require_payoff(loaded);
    const auto m = payoff_moments(w, diffusion_steady_state(loaded.spec));
    if (opt.format == "json")
        os << "{\"mean\":" << fmt_real(m.mean) << ",\"variance\":" << fmt_real(m.variance)
           << "}\n";
    else
        os << "mean,variance\n" << fmt_real(m.mean) << ',' << fmt_real(m.variance) << '\n';
}

template <class Real>
void run_sens(const options& opt, std::ostream& os) {
    const auto loaded = load_spec<Real>(parse_json_file(opt.spec_path));
    const auto& w = require_payoff(loaded);
    const auto rep = stationary_sensitivities(loaded.spec, w, opt.emit_dp);
    if (opt.format == "json") {
        os << "{\"axes\":[";
        for (std::size_t r = 0; r < rep.axes.size(); ++r) {
            if (r) os << ',';
            os << "{\"axis\":" << (r + 1) << ",\"dmean_dmu\":" << fmt_real(rep.axes[r].dmean_dmu)
               << ",\"dmean_dsigma2\":" << fmt_real(rep.axes[r].dmean_dsigma2)
               << ",\"dvar_dmu\":" << fmt_real(rep.axes[r].dvar_dmu)
               << ",\"dvar_dsigma2\":" << fmt_real(rep.axes[r].dvar_dsigma2) << '}';
        }
        os << ']';
        if (opt.emit_dp) {
            os << ",\"dp_dmu\":[";
            for (std::size_t r = 0; r < rep.dp_dmu.size(); ++r)
                os << (r ? "," : "") << json_array(rep.dp_dmu[r]);
            os << "],\"dp_dsigma2\":[";
            for (std::size_t r = 0; r < rep.dp_dsigma2.size(); ++r)
                os << (r ? "," : "") << json_array(rep.dp_dsigma2[r]);
            os << ']';
        }
        os << "}\n";
    } else {
        os << "axis,dmean_dmu,dmean_dsigma2,dvar_dmu,dvar_dsigma2\n";
        for (std::size_t r = 0; r < rep.axes.size(); ++r)
            os << (r + 1) << ',' << fmt_real(rep.axes[r].dmean_dmu) << ','
               << fmt_real(rep.axes[r].dmean_dsigma2) << ',' << fmt_real(rep.axes[r].dvar_dmu)
               << ',' << fmt_real(rep.axes[r].dvar_dsigma2) << '\n';
    }
}

template <class Real>
void run_sweep(const options& opt, std::ostream& os) {
    const auto loaded = load_spec<Real>(parse_json_file(opt.spec_path));
    const auto& w = require_payoff(loaded);
    if (opt.param.empty()) throw invalid_argument_error("sweep: --param is required");
    sweep_parameter target;
    int axis;
    if (opt.param.rfind("mu_", 0) == 0) {
        target = sweep_parameter::mu;
        axis = std::atoi(opt.param.c_str() + 3) - 1;
    } else if (opt.param.rfind("sigma2_", 0) == 0) {
        target = sweep_parameter::sigma2;
        axis = std::atoi(opt.param.c_str() + 7) - 1;
    } else {
        throw invalid_argument_error("sweep: --param must look like mu_1 or sigma2_2");
    }
    std::vector<Real> grid;
    for (double v : parse_grid(opt.grid)) grid.push_back(Real(v));
    const auto rows = comparative_sweep(loaded.spec, w, axis, target, grid);
    const std::size_t d = loaded.spec.axes.size();
    const Real nan = std::numeric_limits<Real>::quiet_NaN();
    if (opt.format == "json") {
        os << '[';
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (i) os << ',';
            os << "{\"parameter_name\":" << json_quote(r.parameter_name)
               << ",\"value\":" << fmt_real(r.value) << ",\"ok\":" << (r.ok ? "true" : "false")
               << ",\"mean\":" << fmt_real(r.ok ? r.moments.mean : nan)
               << ",\"variance\":" << fmt_real(r.ok ? r.moments.variance : nan) << ",\"axes\":[";
            for (std::size_t a = 0; a < d; ++a) {
                if (a) os << ',';
                if (r.ok)
                    os << "{\"dmean_dmu\":" << fmt_real(r.sensitivities.axes[a].dmean_dmu)
                       << ",\"dmean_dsigma2\":" << fmt_real(r.sensitivities.axes[a].dmean_dsigma2)
                       << ",\"dvar_dmu\":" << fmt_real(r.sensitivities.axes[a].dvar_dmu)
                       << ",\"dvar_dsigma2\":" << fmt_real(r.sensitivities.axes[a].dvar_dsigma2)
                       << '}';
                else
                    os << "null";
            }
            os << "]}";
        }
        os << "]\n";
    } else {
        os << "parameter_name,value,mean,variance";
        for (std::size_t a = 1; a <= d; ++a) os << ",dmean_dmu_" << a;
        for (std::size_t a = 1; a <= d; ++a) os << ",dmean_dsigma2_" << a;
        for (std::size_t a = 1; a <= d; ++a) os << ",dvar_dmu_" << a;
        for (std::size_t a = 1; a <= d; ++a) os << ",dvar_dsigma2_" << a;
        os << ",ok\n";
        for (const auto& r : rows) {
            os << r.parameter_name << ',' << fmt_real(r.value) << ','
               << fmt_real(r.ok ? r.moments.mean : nan) << ','
               << fmt_real(r.ok ? r.moments.variance : nan);
            const auto col = [&](auto pick) {
                for (std::size_t a = 0; a < d; ++a)
                    os << ',' << fmt_real(r.ok ? pick(r.sensitivities.axes[a]) : nan);
            };
            col([](const axis_sensitivity<Real>& s) { return s.dmean_dmu; });
            col([](const axis_sensitivity<Real>& s) { return s.dmean_dsigma2; });
            col([](const axis_sensitivity<Real>& s) { return s.dvar_dmu; });
            col([](const axis_sensitivity<Real>& s) { return s.dvar_dsigma2; });
            os << ',' << (r.ok ? 1 : 0) << '\n';
        }
    }
}

template <class Real>
int run_typed(const options& opt, std::ostream& out, std::ostream& err) {
    std::ofstream file;
    std::ostream* os = &out;
    if (!opt.out_path.empty()) {
        file.open(opt.out_path);
        if (!file) {
            err << "error: cannot open output file '" << opt.out_path << "'\n";
            return 1;
        }
        os = &file;
    }
    try {
        if (opt.command == "eig") run_eig<Real>(opt, *os);
        else if (opt.command == "tables") run_tables<Real>(opt, *os);
        else if (opt.command == "queue") run_queue<Real>(opt, *os);
        else if (opt.command == "walk") run_walk<Real>(opt, *os);
        else if (opt.command == "kron") run_kron<Real>(opt, *os);
        else if (opt.command == "diffusion") run_diffusion<Real>(opt, *os);
        else if (opt.command == "moments") run_moments<Real>(opt, *os);
        else if (opt.command == "sens") run_sens<Real>(opt, *os);
        else if (opt.command == "sweep") run_sweep<Real>(opt, *os);
        else {
            err << "error: no command given (see --help)\n";
            return 2;
        }
    } catch (const schema_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

/// Entry point shared by the binary and the tests. `args` excludes the
/// program name. Exit codes: 0 success, 1 domain error, 2 usage or schema
/// error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral analysis of corner-perturbed tridiagonal Toeplitz matrices and the "
                 "birth-death, random-walk and reflected-diffusion models built on them"};
    app.require_subcommand(0, 1);
    options opt;

    const auto add_common = [&](CLI::App* c) {
        c->add_option("--format", opt.format, "output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        c->add_option("--out", opt.out_path, "write output to this file instead of stdout");
    };

    auto* eig = app.add_subcommand("eig", "eigendecomposition of the tau matrix");
    eig->add_option("--n", opt.n, "matrix size")->required();
    eig->add_option("--eps", opt.eps, "top-left corner")->required();
    eig->add_option("--phi", opt.phi, "bottom-right corner")->required();
    eig->add_flag("--closed-form", opt.closed_form_only,
                  "use the closed-form families only; fails outside them");
    eig->add_flag("--no-vectors", opt.no_vectors, "omit eigenvectors from JSON output");
    add_common(eig);

    auto* tables = app.add_subcommand("tables", "outlier validation tables");
    tables->add_option("--which", opt.which, "table number: 1, 2 or 3")->required();
    tables->add_option("--n", opt.n_list, "comma-separated sizes (default 8,16,32,64,128)");
    add_common(tables);

    auto* queue = app.add_subcommand("queue", "finite birth-death queue spectrum / steady state");
    queue->add_option("--n", opt.n, "number of states")->required();
    queue->add_option("--lambda", opt.lambda, "arrival rate")->required();
    queue->add_option("--mu", opt.mu, "service rate")->required();
    queue->add_option("--evolve", opt.evolve_times, "comma-separated times for a trajectory");
    queue->add_option("--start", opt.start_state, "initial point-mass state (1-based)");
    add_common(queue);

    auto* walk = app.add_subcommand("walk", "reflecting random walk spectrum / steady state");
    walk->add_option("--n", opt.n, "number of states")->required();
    walk->add_option("--p", opt.p, "right-step probability")->required();
    walk->add_option("--q", opt.q, "left-step probability")->required();
    walk->add_option("--evolve", opt.evolve_times, "comma-separated integer step counts");
    walk->add_option("--start", opt.start_state, "initial point-mass state (1-based)");
    add_common(walk);

    auto* kron = app.add_subcommand("kron", "multi-axis product/sum process from a JSON spec");
    kron->add_option("--spec", opt.spec_path, "JSON file with kind and axes")->required();
    add_common(kron);

    auto* diffusion = app.add_subcommand("diffusion", "discretized reflected diffusion");
    diffusion->require_subcommand(1);
    for (const char* sub : {"steady", "gap", "spectrum", "evolve"}) {
        auto* c = diffusion->add_subcommand(sub);
        c->add_option("--spec", opt.spec_path, "JSON spec file")->required();
        if (std::string(sub) == "evolve") {
            c->add_option("--t", opt.times, "comma-separated times")->required();
            c->add_option("--p0", opt.p0, "uniform, point:<k>, or comma-separated values");
        }
        add_common(c);
    }

    auto* moments = app.add_subcommand("moments", "stationary payoff mean and variance");
    moments->add_option("--spec", opt.spec_path, "JSON spec file with payoff")->required();
    add_common(moments);

    auto* sens = app.add_subcommand("sens", "stationary moment sensitivities");
    sens->add_option("--spec", opt.spec_path, "JSON spec file with payoff")->required();
    sens->add_flag("--emit-dp", opt.emit_dp, "include steady-state derivative tensors (JSON)");
    add_common(sens);

    auto* sweep = app.add_subcommand("sweep", "comparative statics over one parameter");
    sweep->add_option("--spec", opt.spec_path, "JSON spec file with payoff")->required();
    sweep->add_option("--param", opt.param, "parameter to sweep, e.g. mu_1 or sigma2_2")->required();
    sweep->add_option("--grid", opt.grid, "comma list or start:stop:count")->required();
    add_common(sweep);

    std::vector<const char*> argv;
    argv.push_back("tauspectra");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    for (auto* sub : app.get_subcommands()) {
        opt.command = sub->get_name();
        if (opt.command == "diffusion")
            for (auto* s2 : sub->get_subcommands()) opt.sub = s2->get_name();
    }

    const char* prec = std::getenv("TAU_SPECTRA_PRECISION");
    std::string precision = prec ? prec : "binary64";
    if (precision == "" || precision == "binary64") return run_typed<double>(opt, out, err);
    if (precision == "extended") return run_typed<long double>(opt, out, err);
    err << "usage error: TAU_SPECTRA_PRECISION must be 'binary64' or 'extended', got '"
        << precision << "'\n";
    return 2;
}

} // namespace cli
} // namespace tauspectra

#endif // TAUSPECTRA_CLI_HPP
