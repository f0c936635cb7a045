#pragma once

// Command-line front end. Exit codes: 0 pass, 1 certified failure,
// 2 input error, 3 inconclusive up to the search bound.

#include "hermfactor/hermfactor.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace hermfactor::cli {

enum ExitCode : int { exit_pass = 0, exit_fail = 1, exit_input = 2, exit_inconclusive = 3 };

class InputError : public Error {
public:
    using Error::Error;
};

inline std::string sha256_hex(const std::string& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << int(md[k]);
    return "sha256:" + os.str();
}

inline std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError("cannot read '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// A positional input is a file path when such a file exists, expression
/// text otherwise.
inline std::string load_input_text(const std::string& input)
{
    std::error_code ec;
    if (!input.empty() && std::filesystem::is_regular_file(input, ec)) return read_file(input);
    return input;
}

inline bool looks_like_json(const std::string& text)
{
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) return c == '{';
    return false;
}

inline BihermitianForm load_form(const std::string& text, std::size_t n)
{
    if (looks_like_json(text)) {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const Json::exception& e) {
            throw InputError(std::string("malformed JSON: ") + e.what());
        }
        if (j.value("type", std::string("form")) != "form") throw InputError("expected a form JSON object");
        return form_from_json(j);
    }
    return parse_form(text, n);
}

inline std::string format_mpf(const mpf_class& x, unsigned digits)
{
    const int prec = static_cast<int>(std::max(digits, 1u)) - 1;
    const int len = gmp_snprintf(nullptr, 0, "%.*Fe", prec, x.get_mpf_t());
    std::string s(static_cast<std::size_t>(len) + 1, '\0');
    gmp_snprintf(s.data(), s.size(), "%.*Fe", prec, x.get_mpf_t());
    s.resize(static_cast<std::size_t>(len));
    return s;
}

inline Json numeric_factor_to_json(const NumericFactor& a)
{
    Json entries = Json::array();
    for (std::size_t k = 0; k < a.rows; ++k)
        for (std::size_t c = 0; c < a.cols; ++c)
            for (const auto& [alpha, v] : a(k, c))
                entries.push_back({{"row", k + 1},
                                   {"col", c + 1},
                                   {"alpha", multiindex_to_json(alpha)},
                                   {"re", format_mpf(v.re, a.digits)},
                                   {"im", format_mpf(v.im, a.digits)}});
    return {{"type", "numeric_holo_matrix"}, {"n", a.n},          {"rows", a.rows},
            {"cols", a.cols},               {"digits", a.digits}, {"entries", entries}};
}

/// Report skeleton shared by all commands.
class Report {
public:
    Report(std::string command, Json arguments, const std::string& input_text)
    {
        j_ = {{"type", "report"},
              {"command", std::move(command)},
              {"arguments", std::move(arguments)},
              {"input_digest", sha256_hex(input_text)},
              {"certificates", Json::array()}};
    }

    /// Returns the index of the stored certificate.
    std::size_t add_certificate(Json cert)
    {
        j_["certificates"].push_back(std::move(cert));
        return j_["certificates"].size() - 1;
    }

    Json& operator[](const char* key) { return j_[key]; }
    Json& json() { return j_; }

private:
    Json j_;
};

struct Common {
    std::string input;
    std::string output;
    std::string cert_dir;
    std::size_t n = 0;
    bool no_timings = false;
};

inline void emit(Report& rep, const Common& opt, std::ostream& out, double elapsed_ms)
{
    if (!opt.no_timings) rep["timings"] = {{"total_ms", elapsed_ms}};
    if (!opt.cert_dir.empty()) {
        std::filesystem::create_directories(opt.cert_dir);
        const auto& certs = rep.json()["certificates"];
        const std::string cmd = rep.json()["command"].get<std::string>();
        for (std::size_t k = 0; k < certs.size(); ++k) {
            std::ostringstream name;
            name << cmd << "-" << std::setw(3) << std::setfill('0') << k << "-"
                 << certs[k]["type"].get<std::string>() << ".json";
            std::ofstream f(std::filesystem::path(opt.cert_dir) / name.str());
            f << certs[k].dump(1) << "\n";
        }
    }
    const std::string text = rep.json().dump(1) + "\n";
    if (opt.output.empty() || opt.output == "-") {
        out << text;
    } else {
        std::ofstream f(opt.output);
        if (!f) throw InputError("cannot write '" + opt.output + "'");
        f << text;
    }
}

inline Json step_summary(const StabilizationStep& s, std::size_t cert_index)
{
    return {{"d", s.d},
            {"matrix_size", s.matrix_size},
            {"passed", s.passed},
            {"inertia", inertia_to_json(s.certificate.inertia)},
            {"certificate", cert_index}};
}

inline Json stabilization_to_json(const StabilizationReport& r, Report& rep)
{
    Json trail = Json::array();
    for (const auto& s : r.trail) trail.push_back(step_summary(s, rep.add_certificate(certificate_to_json(s.certificate))));
    Json out = {{"mode", to_string(r.mode)},
                {"d_max", r.d_max},
                {"bidegree", r.bidegree},
                {"d_min", r.d_min ? Json(*r.d_min) : Json(nullptr)},
                {"trail", trail}};
    if (r.factor) {
        out["factor_rows"] = r.factor->size();
        out["factor_certificate"] = rep.add_certificate(factor_certificate_to_json(*r.factor));
    }
    return out;
}

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

inline int cmd_check(const Common& opt, const std::string& mode_name, std::ostream& out)
{
    const auto t0 = Clock::now();
    const StabilizationMode mode = parse_mode(mode_name);
    const std::string text = load_input_text(opt.input);
    const BihermitianForm f = load_form(text, opt.n);
    const CoefficientMatrix cm = coefficient_matrix(f);
    const SignatureCertificate cert = ldl_signature(cm.matrix);
    const bool pass = mode == StabilizationMode::strict ? cert.positive_definite() : cert.positive_semidefinite();

    Report rep("check", {{"mode", mode_name}, {"n", f.n()}}, text);
    rep["input"] = to_expression(f);
    rep["verdict"] = {{"mode", mode_name},
                      {"passed", pass},
                      {"bidegree", *bidegree(f)},
                      {"matrix_size", cm.matrix.rows()},
                      {"inertia", inertia_to_json(cert.inertia)},
                      {"certificate", rep.add_certificate(certificate_to_json(cert))}};
    emit(rep, opt, out, ms_since(t0));
    return pass ? exit_pass : exit_fail;
}

inline int cmd_stabilize(const Common& opt, const std::string& mode_name, unsigned dmax, std::ostream& out)
{
    const auto t0 = Clock::now();
    const StabilizationMode mode = parse_mode(mode_name);
    const std::string text = load_input_text(opt.input);
    const BihermitianForm f = load_form(text, opt.n);
    const StabilizationReport r = find_minimal_d(f, mode, dmax);
    Report rep("stabilize", {{"mode", mode_name}, {"dmax", dmax}, {"n", f.n()}}, text);
    rep["input"] = to_expression(f);
    rep["verdict"] = stabilization_to_json(r, rep);
    emit(rep, opt, out, ms_since(t0));
    return r.d_min ? exit_pass : exit_inconclusive;
}

inline int cmd_factor(const Common& opt, unsigned d, const std::string& mode_name, unsigned digits, std::ostream& out)
{
    const auto t0 = Clock::now();
    const StabilizationMode mode = parse_mode(mode_name);
    const std::string text = load_input_text(opt.input);
    const BihermitianForm f = load_form(text, opt.n);
    if (!bidegree(f)) throw BidegreeError("factor: form is not bihomogeneous");
    if (!is_hermitian_symmetric(f)) throw NotHermitianError("factor: form is not hermitian-symmetric");
    const BihermitianForm g = multiplier_power(f, d);
    const CoefficientMatrix cm = coefficient_matrix(g);
    const SignatureCertificate cert = ldl_signature(cm.matrix);
    const auto factor = factor_from_certificate(g, cm, cert, mode == StabilizationMode::strict);

    Report rep("factor", {{"d", d}, {"mode", mode_name}, {"float_digits", digits}, {"n", f.n()}}, text);
    rep["input"] = to_expression(f);
    Json verdict = {{"d", d},
                    {"mode", mode_name},
                    {"factorable", factor.has_value()},
                    {"inertia", inertia_to_json(cert.inertia)},
                    {"certificate", rep.add_certificate(certificate_to_json(cert))}};
    if (factor) {
        verdict["rows"] = factor->size();
        Json rows = Json::array();
        for (std::size_t k = 0; k < factor->rows.rows(); ++k) {
            Json row = Json::array();
            for (std::size_t c = 0; c < factor->rows.cols(); ++c) row.push_back(to_expression(factor->rows(k, c)));
            rows.push_back({{"weight", to_string(factor->rows.weight(k))}, {"entries", row}});
        }
        verdict["factor"] = rows;
        verdict["factor_certificate"] = rep.add_certificate(factor_certificate_to_json(*factor));
        if (digits > 0) {
            const NumericFactor nf = numeric_factor(*factor, digits);
            verdict["numeric_factor"] = numeric_factor_to_json(nf);
            verdict["numeric_reconstruction_error"] =
                numeric_reconstruction_error(nf, random_sphere_points(f.n(), 20, 20261019u));
        }
    } else if (cert.witness) {
        verdict["witness"] = vector_to_json(*cert.witness);
    }
    rep["verdict"] = verdict;
    emit(rep, opt, out, ms_since(t0));
    return factor ? exit_pass : exit_fail;
}

inline int cmd_decompose(const Common& opt, std::ostream& out)
{
    const auto t0 = Clock::now();
    const std::string text = load_input_text(opt.input);
    const BihermitianForm f = load_form(text, opt.n);
    const DifferenceOfSquares ds = difference_of_squares(f);
    Report rep("decompose", {{"n", f.n()}}, text);
    rep["input"] = to_expression(f);
    auto rows_json = [](const HoloPolyMatrix& a) {
        Json rows = Json::array();
        for (std::size_t k = 0; k < a.rows(); ++k) {
            Json row = Json::array();
            for (std::size_t c = 0; c < a.cols(); ++c) row.push_back(to_expression(a(k, c)));
            rows.push_back({{"weight", to_string(a.weight(k))}, {"entries", row}});
        }
        return rows;
    };
    rep["verdict"] = {{"bihomogeneous", bidegree(f).has_value()},
                      {"positive_rank", ds.positive.size()},
                      {"negative_rank", ds.negative.size()},
                      {"positive", rows_json(ds.positive.rows)},
                      {"negative", rows_json(ds.negative.rows)},
                      {"reconstructs", ds.reconstruct() == f},
                      {"certificate", rep.add_certificate(certificate_to_json(ds.certificate))},
                      {"positive_certificate", rep.add_certificate(factor_certificate_to_json(ds.positive))},
                      {"negative_certificate", rep.add_certificate(factor_certificate_to_json(ds.negative))}};
    emit(rep, opt, out, ms_since(t0));
    return exit_pass;
}

/// Family file: JSON {"family": [{"label", "expr" | "form"}]} or text lines
/// "label: expression" (blank lines and '#' comments skipped).
inline Family load_family(const std::string& text, std::size_t n)
{
    Family fam;
    if (looks_like_json(text)) {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const Json::exception& e) {
            throw InputError(std::string("malformed JSON: ") + e.what());
        }
        for (const auto& e : j.at("family")) {
            const std::string label = e.at("label").get<std::string>();
            if (e.contains("form")) fam.emplace_back(label, form_from_json(e.at("form")));
            else fam.emplace_back(label, parse_form(e.at("expr").get<std::string>(), n));
        }
        return fam;
    }
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw InputError("family line without 'label:' prefix: " + line);
        std::string label = line.substr(first, colon - first);
        while (!label.empty() && std::isspace(static_cast<unsigned char>(label.back()))) label.pop_back();
        fam.emplace_back(label, parse_form(line.substr(colon + 1), n));
    }
    return fam;
}

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

inline int cmd_sweep(const Common& opt, const std::string& mode_name, unsigned dmax, const std::string& csv_path,
                     bool parallel, std::ostream& out)
{
    const auto t0 = Clock::now();
    const StabilizationMode mode = parse_mode(mode_name);
    const std::string text = load_input_text(opt.input);
    const Family fam = load_family(text, opt.n);
    const auto rows = stabilization_sweep(fam, mode, dmax, parallel);

    std::ostringstream csv;
    csv << "label,d_min,matrix_size,elapsed_ms\n";
    Report rep("sweep", {{"mode", mode_name}, {"dmax", dmax}}, text);
    Json table = Json::array();
    for (const auto& row : rows) {
        csv << csv_field(row.label) << "," << (row.d_min ? std::to_string(*row.d_min) : "absent") << ","
            << row.matrix_size << "," << std::fixed << std::setprecision(3) << row.elapsed_ms << "\n";
        Json jr = {{"label", row.label},
                   {"d_min", row.d_min ? Json(*row.d_min) : Json(nullptr)},
                   {"matrix_size", row.matrix_size}};
        if (!opt.no_timings) jr["elapsed_ms"] = row.elapsed_ms;
        if (!row.error.empty()) jr["error"] = row.error;
        if (row.report) jr["search"] = stabilization_to_json(*row.report, rep);
        table.push_back(jr);
    }
    rep["verdict"] = {{"rows", table}};
    if (csv_path.empty() || csv_path == "-") {
        out << csv.str();
    } else {
        std::ofstream f(csv_path);
        if (!f) throw InputError("cannot write '" + csv_path + "'");
        f << csv.str();
    }
    if (!opt.output.empty() || !opt.cert_dir.empty()) {
        Common o = opt;
        if (o.output.empty()) o.output = (std::filesystem::path(opt.cert_dir) / "sweep-report.json").string();
        std::ostringstream sink;
        emit(rep, o, sink, ms_since(t0));
    }
    return exit_pass;
}

inline std::string human_symbol_report(const EllipticReport& r)
{
    std::ostringstream os;
    os << "symbol (complex form): " << to_expression(r.complex_form) << "\n";
    if (r.sign < 0) os << "note: symbol negated (negative definite candidate)\n";
    os << "order: " << r.order << ", n = " << r.n << "\n";
    os << "verdict: " << to_string(r.verdict) << "\n";
    if (r.elliptic_certified) {
        os << "stabilization exponent d = " << *r.elliptic_certified << " (Laplacian power applied)\n";
        os << "q_d = |A(∂)|^2 with rows:\n";
        for (std::size_t k = 0; k < r.factor->rows.rows(); ++k)
            os << "  " << to_string(r.factor->rows.weight(k)) << " * |" << differential_operator_text(r.factor->rows(k, 0))
               << "|^2\n";
    } else {
        os << "no strict factorization up to d = " << r.search.d_max << "\n";
    }
    if (r.zero_witness) {
        os << "zero on the unit sphere at z = (";
        for (std::size_t k = 0; k < r.zero_witness->size(); ++k) os << (k ? ", " : "") << to_string((*r.zero_witness)[k]);
        os << ")\n";
    }
    os << "variety condition V(A) = {0}: " << EllipticReport::variety_condition << "\n";
    return os.str();
}

inline int cmd_symbol(const Common& opt, unsigned dmax, const std::string& format, std::ostream& out)
{
    const auto t0 = Clock::now();
    const std::string text = load_input_text(opt.input);
    EllipticReport r;
    std::string input_expr;
    if (!looks_like_json(text) && parse_document(text).uses(2)) {
        const RealSymbol p = parse_real_symbol(text, opt.n);
        input_expr = to_expression(p);
        r = certify_elliptic(p, dmax);
    } else {
        const BihermitianForm f = load_form(text, opt.n);
        input_expr = to_expression(f);
        r = certify_elliptic(f, dmax);
    }
    if (format == "text") {
        out << human_symbol_report(r);
    } else {
        Report rep("symbol", {{"dmax", dmax}, {"n", r.n}}, text);
        rep["input"] = input_expr;
        Json v = {{"verdict", to_string(r.verdict)},
                  {"order", r.order},
                  {"sign", r.sign},
                  {"complex_form", to_expression(r.complex_form)},
                  {"elliptic_certified", r.elliptic_certified ? Json(*r.elliptic_certified) : Json(nullptr)},
                  {"variety_condition", EllipticReport::variety_condition},
                  {"search", stabilization_to_json(r.search, rep)}};
        if (r.e_matrix) v["e_matrix"] = matrix_to_json(*r.e_matrix);
        if (r.factor) {
            Json ops = Json::array();
            for (std::size_t k = 0; k < r.factor->rows.rows(); ++k)
                ops.push_back({{"weight", to_string(r.factor->rows.weight(k))},
                               {"operator", differential_operator_text(r.factor->rows(k, 0))}});
            v["operator_factor"] = ops;
        }
        if (r.zero_witness) v["zero_witness"] = vector_to_json(*r.zero_witness);
        rep["verdict"] = v;
        emit(rep, opt, out, ms_since(t0));
    }
    switch (r.verdict) {
    case EllipticVerdict::elliptic: return exit_pass;
    case EllipticVerdict::not_elliptic: return exit_fail;
    default: return exit_inconclusive;
    }
}

/// Re-checks one certificate object; returns an empty string when valid.
inline std::string verify_one(const Json& c)
{
    const std::string type = c.value("type", std::string());
    if (type == "signature_certificate") {
        const VerifyResult r = verify_certificate(certificate_from_json(c));
        return r.ok ? std::string() : r.reason;
    }
    if (type == "factor_certificate") {
        const WeightedGramFactor w = factor_certificate_from_json(c);
        return w.reconstructs() ? std::string() : "gram(factor) != target";
    }
    throw InputError("unknown certificate type '" + type + "'");
}

inline int cmd_verify(const std::string& path, std::ostream& out)
{
    std::string text;
    Json j;
    try {
        text = read_file(path);
        j = Json::parse(text);
    } catch (const Json::exception&) {
        out << "error: not a JSON file\n";
        return exit_input;
    }
    if (!j.is_object()) {
        out << "error: not a certificate file\n";
        return exit_input;
    }
    std::vector<const Json*> certs;
    const std::string type = j.value("type", std::string());
    if (type == "report") {
        for (const auto& c : j.at("certificates")) certs.push_back(&c);
    } else if (type == "signature_certificate" || type == "factor_certificate") {
        certs.push_back(&j);
    } else {
        out << "error: unsupported file type '" << type << "'\n";
        return exit_input;
    }
    if (certs.empty()) {
        out << "error: no certificates in file\n";
        return exit_input;
    }
    std::size_t bad = 0;
    for (std::size_t k = 0; k < certs.size(); ++k) {
        std::string why;
        try {
            why = verify_one(*certs[k]);
        } catch (const InputError&) {
            throw;
        } catch (const std::exception& e) {
            why = std::string("malformed certificate: ") + e.what();
        }
        if (!why.empty()) {
            ++bad;
            out << "certificate " << k << ": INVALID (" << why << ")\n";
        }
    }
    out << (bad ? "FAILED: " : "OK: ") << certs.size() - bad << "/" << certs.size() << " certificates valid\n";
    return bad ? exit_fail : exit_pass;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact positivity certificates and holomorphic factorizations of Hermitian polynomial kernels"};
    app.require_subcommand(1);

    Common opt;
    std::string mode = "strict", format = "json", csv_path;
    unsigned dmax = 16, d = 0, digits = 12;
    bool parallel = false;

    auto add_common = [&](CLI::App* c, const char* input_help) {
        c->add_option("input", opt.input, input_help)->required();
        c->add_option("-o,--output", opt.output, "Report path (default: stdout)");
        c->add_option("--cert-dir", opt.cert_dir, "Also write each certificate to this directory");
        c->add_option("--n", opt.n, "Ambient dimension (default: largest variable index)");
        c->add_flag("--no-timings", opt.no_timings, "Omit timings so reports are byte-reproducible");
    };
    const char* form_help = "Expression text, or a file holding an expression or form JSON";

    auto* check = app.add_subcommand("check", "Decide PD (strict) or PSD (semi) of the coefficient matrix");
    add_common(check, form_help);
    check->add_option("--mode", mode, "strict | semi")->check(CLI::IsMember({"strict", "semi"}));

    auto* stab = app.add_subcommand("stabilize", "Find the least d with <z,w>^d F factorable");
    add_common(stab, form_help);
    stab->add_option("--mode", mode, "strict | semi")->check(CLI::IsMember({"strict", "semi"}));
    stab->add_option("--dmax", dmax, "Largest exponent searched")->capture_default_str();

    auto* fac = app.add_subcommand("factor", "Holomorphic factor of <z,w>^d F");
    add_common(fac, form_help);
    fac->add_option("--d", d, "Multiplier exponent")->capture_default_str();
    std::string fac_mode = "semi";
    fac->add_option("--mode", fac_mode, "semi (any factor) | strict (spanning rows)")
        ->check(CLI::IsMember({"strict", "semi"}));
    fac->add_option("--float-digits", digits, "Digits of the numeric factor (0 disables)")->capture_default_str();

    auto* dec = app.add_subcommand("decompose", "Difference of squared norms |A|^2 - |B|^2");
    add_common(dec, form_help);

    auto* sweep = app.add_subcommand("sweep", "Minimal exponents over a family of forms");
    add_common(sweep, "Family file (JSON or 'label: expression' lines)");
    sweep->add_option("--mode", mode, "strict | semi")->check(CLI::IsMember({"strict", "semi"}));
    sweep->add_option("--dmax", dmax, "Largest exponent searched")->capture_default_str();
    sweep->add_option("--csv", csv_path, "CSV path (default: stdout)");
    sweep->add_flag("--parallel", parallel, "Search family members concurrently");

    auto* sym = app.add_subcommand("symbol", "Certify ellipticity of a complex-bihomogeneous symbol");
    add_common(sym, "Symbol in x1..x2n, or in z/zb variables");
    sym->add_option("--dmax", dmax, "Largest Laplacian power searched")->capture_default_str();
    sym->add_option("--format", format, "json | text")->check(CLI::IsMember({"json", "text"}));

    std::string verify_path;
    auto* ver = app.add_subcommand("verify", "Re-check certificates in a certificate or report file");
    ver->add_option("file", verify_path, "Certificate or report JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? exit_pass : exit_input;
    }

    try {
        if (*check) return cmd_check(opt, mode, out);
        if (*stab) return cmd_stabilize(opt, mode, dmax, out);
        if (*fac) return cmd_factor(opt, d, fac_mode, digits, out);
        if (*dec) return cmd_decompose(opt, out);
        if (*sweep) return cmd_sweep(opt, mode, dmax, csv_path, parallel, out);
        if (*sym) return cmd_symbol(opt, dmax, format, out);
        if (*ver) return cmd_verify(verify_path, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    }
    return exit_input;
}

}  // namespace hermfactor::cli
