#include "localize/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "localize/decomp.hpp"
#include "localize/error.hpp"
#include "localize/io.hpp"
#include "localize/quantum.hpp"
#include "localize/verify.hpp"

namespace localize::cli {

namespace {

using io::Json;

struct Common {
    ToleranceConfig tol;
    std::uint64_t seed = 42;
    std::string out_path;
};

class Emitter {
public:
    Emitter(const Common& common, std::ostream& out) : common_(common), out_(out) {}

    void text(const std::string& s) {
        if (common_.out_path.empty()) {
            out_ << s;
        } else {
            io::write_text_file(common_.out_path, s);
        }
    }
    void json(const Json& j) { text(io::dump(j) + "\n"); }

private:
    const Common& common_;
    std::ostream& out_;
};

HermitianOperator load_operator(const std::string& path, const ToleranceConfig& tol) {
    const Json j = io::read_json_file(path);
    try {
        return io::operator_from_json(j, tol);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.message());
    }
}

DensityMatrix load_state(const std::string& path, const ToleranceConfig& tol) {
    const HermitianOperator op = load_operator(path, tol);
    try {
        return DensityMatrix::from_operator(op, tol);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.message());
    }
}

Subspace load_subspace(const std::string& path, const ToleranceConfig& tol) {
    const Json j = io::read_json_file(path);
    try {
        return io::subspace_from_json(j, tol);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.message());
    }
}

Json optional_matrix(const std::optional<DensityMatrix>& m) {
    return m ? io::matrix_to_json(m->matrix()) : Json(nullptr);
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json state_json(const DensityMatrix& rho, const Subspace& v, const ToleranceConfig& tol) {
    const StateDecomposition sd = state_decompose(rho, v, tol);
    const ProbabilityTable tab = probability_table(rho, v, tol);
    Json j;
    j["lambda"] = sd.lam;
    j["lambda_perp"] = tab.lam_perp;
    j["p"] = tab.p;
    j["deficiency"] = tab.deficiency;
    j["log_lambda"] = finite_or_null(log_lambda(rho, v, tol));
    j["rho_B"] = optional_matrix(sd.rho_B);
    j["rho_C"] = optional_matrix(sd.rho_C);
    j["lambda_rho_B"] = io::matrix_to_json(sd.B.matrix());
    j["one_minus_lambda_rho_C"] = io::matrix_to_json(sd.C.matrix());
    return j;
}

void check_dims(const HermitianOperator& a, const Subspace& v) {
    require_same_dim(a.dim(), v.ambient_dim(), "operator and subspace");
}

// decompose --------------------------------------------------------------

struct DecomposeArgs {
    std::string matrix;
    std::string subspace;
    std::string route = "all";
};

int cmd_decompose(const DecomposeArgs& args, const Common& c, std::ostream& out, std::ostream& err) {
    const HermitianOperator a = load_operator(args.matrix, c.tol);
    const Subspace v = load_subspace(args.subspace, c.tol);
    check_dims(a, v);

    Json residuals = Json::object();
    std::optional<Decomposition> dec;
    bool agree = true;
    if (args.route == "schur") {
        dec = decompose(a, v, c.tol);
    } else if (args.route == "projection") {
        dec = decompose_via_projection(a, v, c.tol);
    } else if (args.route == "inverse") {
        dec = decompose_via_inverse(a, v, c.tol);
    } else {
        dec = decompose(a, v, c.tol);
        const Decomposition p = decompose_via_projection(a, v, c.tol);
        const Decomposition i = decompose_via_inverse(a, v, c.tol);
        const double scale = std::max(a.norm(), 1e-300);
        const double sp = (dec->B.matrix() - p.B.matrix()).norm() / scale;
        const double si = (dec->B.matrix() - i.B.matrix()).norm() / scale;
        const double pi = (p.B.matrix() - i.B.matrix()).norm() / scale;
        residuals["schur_projection"] = sp;
        residuals["schur_inverse"] = si;
        residuals["projection_inverse"] = pi;
        agree = std::max({sp, si, pi}) <= c.tol.agree_tol;
    }

    Json j;
    j["route"] = args.route;
    j["lambda"] = dec->tb;
    j["B"] = io::matrix_to_json(dec->B.matrix());
    j["C"] = io::matrix_to_json(dec->C.matrix());
    j["ran_B_basis"] = io::subspace_to_json(dec->ran_B);
    j["ran_C_basis"] = io::subspace_to_json(dec->ran_C);
    j["route_agreement_residuals"] = residuals;
    Emitter(c, out).json(j);
    if (!agree) {
        err << "error: constructions disagree beyond agree_tol " << io::format_double(c.tol.agree_tol) << "\n";
        return Failure;
    }
    return Ok;
}

// lambda / table ------------------------------------------------------------

struct StateArgs {
    std::string state;
    std::string subspace;
    std::optional<std::string> qubit_a;
    std::optional<std::string> qubit_theta;
    std::string format = "json";
};

// Either a state/subspace file pair or a qubit (a, theta) with V = span(e1).
std::pair<DensityMatrix, Subspace> resolve_state(const StateArgs& args, const ToleranceConfig& tol) {
    if (args.qubit_a || args.qubit_theta) {
        if (!args.qubit_a || !args.qubit_theta) {
            throw Error(ErrorCode::ParseError, "--a and --theta must be given together");
        }
        if (!args.state.empty() || !args.subspace.empty()) {
            throw Error(ErrorCode::ParseError, "give either STATE SUBSPACE files or --a/--theta, not both");
        }
        const double a = std::stod(*args.qubit_a);
        const double theta = parse_angle(*args.qubit_theta);
        if (!(a >= 0.0 && a < 1.0)) throw Error(ErrorCode::DomainError, "a must lie in [0, 1)");
        return {qubit_state(a, theta), Subspace::from_orthonormal(Matrix::Identity(2, 1))};
    }
    if (args.state.empty() || args.subspace.empty()) {
        throw Error(ErrorCode::ParseError, "expected STATE and SUBSPACE files");
    }
    DensityMatrix rho = load_state(args.state, tol);
    Subspace v = load_subspace(args.subspace, tol);
    check_dims(rho.op(), v);
    return {std::move(rho), std::move(v)};
}

int cmd_lambda(const StateArgs& args, const Common& c, std::ostream& out) {
    const auto [rho, v] = resolve_state(args, c.tol);
    Emitter(c, out).json(state_json(rho, v, c.tol));
    return Ok;
}

std::string table_text(const ProbabilityTable& t) {
    auto cell = [](double x) {
        std::ostringstream s;
        s << std::setw(24) << io::format_double(x);
        return s.str();
    };
    std::ostringstream s;
    s << std::left << std::setw(8) << "" << std::right << std::setw(24) << "B" << std::setw(24) << "C"
      << std::setw(24) << "total" << "\n";
    s << std::left << std::setw(8) << "V" << std::right << cell(t.v_b) << cell(t.v_c) << cell(t.p) << "\n";
    s << std::left << std::setw(8) << "V_perp" << std::right << cell(t.vperp_b) << cell(t.vperp_c)
      << cell(1.0 - t.p) << "\n";
    s << std::left << std::setw(8) << "total" << std::right << cell(t.v_b + t.vperp_b)
      << cell(t.v_c + t.vperp_c) << cell(t.v_b + t.v_c + t.vperp_b + t.vperp_c) << "\n";
    s << "lambda_perp " << io::format_double(t.lam_perp) << "\n";
    s << "deficiency  " << io::format_double(t.deficiency) << "\n";
    return s.str();
}

int cmd_table(const StateArgs& args, const Common& c, std::ostream& out) {
    const auto [rho, v] = resolve_state(args, c.tol);
    const ProbabilityTable t = probability_table(rho, v, c.tol);
    if (args.format == "text") {
        Emitter(c, out).text(table_text(t));
        return Ok;
    }
    Json j;
    j["rows"] = Json::array({"V", "V_perp"});
    j["columns"] = Json::array({"B", "C", "total"});
    j["cells"] = Json::array({Json::array({t.v_b, t.v_c, t.p}),
                              Json::array({t.vperp_b, t.vperp_c, 1.0 - t.p})});
    j["lambda"] = t.lam;
    j["lambda_perp"] = t.lam_perp;
    j["p"] = t.p;
    j["deficiency"] = t.deficiency;
    Emitter(c, out).json(j);
    return Ok;
}

// reconstruct ----------------------------------------------------------------

int cmd_reconstruct(const std::string& path, const Common& c, std::ostream& out) {
    const Json j = io::read_json_file(path);
    std::vector<Probe> probes;
    try {
        if (!j.is_object() || !j.contains("probes") || !j["probes"].is_array()) {
            throw Error(ErrorCode::ParseError, "expected an object with a 'probes' array");
        }
        const Json& list = j["probes"];
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string field = "probes[" + std::to_string(i) + "]";
            const Json& p = list[i];
            if (!p.is_object() || !p.contains("psi") || !p.contains("lambda") || !p["lambda"].is_number()) {
                throw Error(ErrorCode::ParseError, field + ": expected {\"psi\": [...], \"lambda\": number}");
            }
            probes.push_back({io::vector_from_json(p["psi"], field + ".psi"), p["lambda"].get<double>()});
        }
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.message());
    }
    const HermitianOperator a = reconstruct(probes, c.tol);
    Emitter(c, out).json(io::matrix_to_json(a.matrix()));
    return Ok;
}

// mask / unmask ---------------------------------------------------------------

struct MaskArgs {
    std::string rho;
    std::string sigma;
    std::string subspace;
    double lam = 0.0;
};

int cmd_mask(const MaskArgs& args, const Common& c, std::ostream& out) {
    const DensityMatrix rho = load_state(args.rho, c.tol);
    const DensityMatrix sigma = load_state(args.sigma, c.tol);
    const Subspace v = load_subspace(args.subspace, c.tol);
    check_dims(rho.op(), v);
    const DensityMatrix masked = mask(rho, sigma, args.lam, v, c.tol);
    Emitter(c, out).json(io::matrix_to_json(masked.matrix()));
    return Ok;
}

int cmd_unmask(const std::string& state, const std::string& subspace, const Common& c, std::ostream& out) {
    const DensityMatrix rho = load_state(state, c.tol);
    const Subspace v = load_subspace(subspace, c.tol);
    check_dims(rho.op(), v);
    const StateDecomposition sd = unmask(rho, v, c.tol);
    Json j;
    j["lambda"] = sd.lam;
    j["rho"] = optional_matrix(sd.rho_B);
    j["sigma"] = optional_matrix(sd.rho_C);
    Emitter(c, out).json(j);
    return Ok;
}

// bloch ------------------------------------------------------------------------

struct BlochArgs {
    std::vector<double> a;
    std::string theta = "pi/8";
    std::string theta_step = "pi/8";
    int theta_steps = 7;
};

int cmd_bloch(const BlochArgs& args, const Common& c, std::ostream& out) {
    std::vector<double> as = args.a;
    if (as.empty()) {
        for (int i = 1; i <= 9; ++i) as.push_back(i / 10.0);
    }
    if (args.theta_steps < 1) throw Error(ErrorCode::DomainError, "--theta-steps must be at least 1");
    const double theta0 = parse_angle(args.theta);
    const double step = parse_angle(args.theta_step);
    const Subspace v = Subspace::from_orthonormal(Matrix::Identity(2, 1));

    std::ostringstream s;
    s << "a,theta,lambda,lambda_perp,deficiency,dx,dy,dz\n";
    for (double a : as) {
        if (!(a >= 0.0 && a < 1.0)) throw Error(ErrorCode::DomainError, "a must lie in [0, 1)");
        for (int j = 0; j < args.theta_steps; ++j) {
            const double theta = theta0 + j * step;
            const DensityMatrix rho = qubit_state(a, theta);
            const ProbabilityTable t = probability_table(rho, v, c.tol);
            s << io::format_double(a) << ',' << io::format_double(theta) << ',' << io::format_double(t.lam)
              << ',' << io::format_double(t.lam_perp) << ',' << io::format_double(t.deficiency);
            const auto rho_d = deficiency_state(rho, v, c.tol);
            if (rho_d) {
                const BlochVector r = bloch_vector(*rho_d);
                s << ',' << io::format_double(r.x) << ',' << io::format_double(r.y) << ','
                  << io::format_double(r.z);
            } else {
                s << ",,,";
            }
            s << "\n";
        }
    }
    Emitter(c, out).text(s.str());
    return Ok;
}

// verify -------------------------------------------------------------------------

struct VerifyArgs {
    std::string suite = "all";
    long trials = 200;
    std::optional<long> trial_index;
    std::optional<std::uint64_t> trial_seed;
};

int cmd_verify(const VerifyArgs& args, const Common& c, std::ostream& out, std::ostream& err) {
    std::vector<std::string> names;
    if (args.suite == "all") {
        names = verify::suite_names();
    } else {
        names.push_back(args.suite);
    }
    if (args.trial_index.has_value() != args.trial_seed.has_value()) {
        throw Error(ErrorCode::ParseError, "--trial-index and --trial-seed must be given together");
    }
    if (args.trial_index && args.suite == "all") {
        throw Error(ErrorCode::ParseError, "replaying a trial needs a single suite name");
    }

    Json reports = Json::array();
    bool ok = true;
    for (const std::string& name : names) {
        const verify::SuiteReport r =
            args.trial_index ? verify::replay_trial(name, *args.trial_index, *args.trial_seed, c.tol)
                             : verify::run_suite(name, args.trials, c.seed, c.tol);
        ok = ok && r.ok();
        if (!r.ok()) err << "suite " << name << ": " << r.failures() << " failed checks\n";
        reports.push_back(r.to_json());
    }
    Json j;
    j["seed"] = c.seed;
    j["trials"] = args.trial_index ? 1 : args.trials;
    j["ok"] = ok;
    j["suites"] = std::move(reports);
    Emitter(c, out).json(j);
    return ok ? Ok : Failure;
}

}  // namespace

double parse_angle(const std::string& text) {
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    }
    const auto fail = [&]() -> double {
        throw Error(ErrorCode::ParseError, "cannot parse angle '" + text + "'");
    };
    if (s.empty()) return fail();

    const std::size_t at = s.find("pi");
    if (at == std::string::npos) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(s, &used);
        } catch (const std::exception&) {
            return fail();
        }
        if (used != s.size()) return fail();
        return x;
    }

    std::string head = s.substr(0, at);
    std::string tail = s.substr(at + 2);
    if (!head.empty() && head.back() == '*') head.pop_back();
    double coeff = 1.0;
    if (head == "-") {
        coeff = -1.0;
    } else if (!head.empty() && head != "+") {
        std::size_t used = 0;
        try {
            coeff = std::stod(head, &used);
        } catch (const std::exception&) {
            return fail();
        }
        if (used != head.size()) return fail();
    }
    double denom = 1.0;
    if (!tail.empty()) {
        if (tail[0] != '/' || tail.size() == 1) return fail();
        std::size_t used = 0;
        try {
            denom = std::stod(tail.substr(1), &used);
        } catch (const std::exception&) {
            return fail();
        }
        if (used != tail.size() - 1 || denom == 0.0) return fail();
    }
    return coeff * std::numbers::pi / denom;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decompose positive operators along a subspace and verify their properties", "localize"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--tol-rank", common.tol.rank_tol, "relative rank cutoff");
    app.add_option("--tol-psd", common.tol.psd_tol, "relative positivity slack");
    app.add_option("--tol-agree", common.tol.agree_tol, "relative agreement tolerance");
    app.add_option("--seed", common.seed, "root seed for random suites")->envname("LOCALIZE_SEED");
    app.add_option("--out", common.out_path, "write the result here instead of stdout");

    DecomposeArgs dec;
    auto* sub_dec = app.add_subcommand("decompose", "split A into B (inside V) and C");
    sub_dec->add_option("matrix", dec.matrix, "matrix JSON file")->required();
    sub_dec->add_option("subspace", dec.subspace, "subspace JSON file")->required();
    sub_dec->add_option("--route", dec.route, "construction to use")
        ->check(CLI::IsMember({"schur", "projection", "inverse", "all"}));

    StateArgs lam_args;
    auto* sub_lam = app.add_subcommand("lambda", "localization probability and normalized components");
    StateArgs table_args;
    auto* sub_table = app.add_subcommand("table", "joint probability table");
    for (auto [sub, sa] : {std::pair{sub_lam, &lam_args}, std::pair{sub_table, &table_args}}) {
        sub->add_option("state", sa->state, "density matrix JSON file");
        sub->add_option("subspace", sa->subspace, "subspace JSON file");
        sub->add_option("--a", sa->qubit_a, "qubit Bloch length (V = span(e1))");
        sub->add_option("--theta", sa->qubit_theta, "qubit polar angle, e.g. pi/3");
    }
    sub_table->add_option("--format", table_args.format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));

    std::string probes_path;
    auto* sub_rec = app.add_subcommand("reconstruct", "recover A from one-dimensional weights");
    sub_rec->add_option("probes", probes_path, "probe JSON file")->required();

    MaskArgs mask_args;
    auto* sub_mask = app.add_subcommand("mask", "lambda rho + (1 - lambda) sigma");
    sub_mask->add_option("rho", mask_args.rho, "state supported in V")->required();
    sub_mask->add_option("sigma", mask_args.sigma, "state whose support meets V at zero")->required();
    sub_mask->add_option("subspace", mask_args.subspace, "subspace JSON file")->required();
    sub_mask->add_option("--lambda", mask_args.lam, "mixing weight in [0, 1]")->required();

    std::string unmask_state;
    std::string unmask_subspace;
    auto* sub_unmask = app.add_subcommand("unmask", "recover lambda, rho and sigma from a masked state");
    sub_unmask->add_option("state", unmask_state, "masked state JSON file")->required();
    sub_unmask->add_option("subspace", unmask_subspace, "subspace JSON file")->required();

    BlochArgs bloch_args;
    auto* sub_bloch = app.add_subcommand("bloch", "qubit weights and deficiency Bloch vector as CSV");
    sub_bloch->add_option("--a", bloch_args.a, "Bloch lengths (default 0.1 ... 0.9)");
    sub_bloch->add_option("--theta", bloch_args.theta, "first angle");
    sub_bloch->add_option("--theta-step", bloch_args.theta_step, "angle increment");
    sub_bloch->add_option("--theta-steps", bloch_args.theta_steps, "number of angles");

    VerifyArgs verify_args;
    auto* sub_verify = app.add_subcommand("verify", "run randomized property suites");
    sub_verify->add_option("suite", verify_args.suite, "suite name or 'all'");
    sub_verify->add_option("--trials", verify_args.trials, "trials per suite")->check(CLI::NonNegativeNumber);
    sub_verify->add_option("--trial-index", verify_args.trial_index, "replay one trial: its index");
    sub_verify->add_option("--trial-seed", verify_args.trial_seed, "replay one trial: its seed");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return BadInput;
    }

    try {
        common.tol.validate();
        if (*sub_dec) return cmd_decompose(dec, common, out, err);
        if (*sub_lam) return cmd_lambda(lam_args, common, out);
        if (*sub_table) return cmd_table(table_args, common, out);
        if (*sub_rec) return cmd_reconstruct(probes_path, common, out);
        if (*sub_mask) return cmd_mask(mask_args, common, out);
        if (*sub_unmask) return cmd_unmask(unmask_state, unmask_subspace, common, out);
        if (*sub_bloch) return cmd_bloch(bloch_args, common, out);
        if (*sub_verify) return cmd_verify(verify_args, common, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return BadInput;
    } catch (const std::invalid_argument& e) {
        err << "error: invalid number: " << e.what() << "\n";
        return BadInput;
    } catch (const std::out_of_range& e) {
        err << "error: number out of range: " << e.what() << "\n";
        return BadInput;
    }
    return BadInput;
}

}  // namespace localize::cli
