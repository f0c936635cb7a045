#pragma once

// JSON schemas. Every rational is a "p/q" string so values stay exact.
//
//   form        {type:"form", n, r, terms:[{i, j, alpha, beta, re, im}]}      (i, j 1-based)
//   holo_matrix {type:"holo_matrix", n, rows, cols, weights:[..],
//                entries:[{row, col, alpha, re, im}]}                          (row, col 1-based)
//   matrix      {rows, cols, entries:[[i, j, re, im], ..]}                     (0-based, nonzeros)
//   signature_certificate {type, size, matrix, permutation, transform, L, D,
//                          inertia:{positive, negative, zero}, witness}
//   factor_certificate    {type, target: form, factor: holo_matrix}

#include "hermfactor/certify.hpp"
#include "hermfactor/factor.hpp"
#include "hermfactor/form.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace hermfactor {

using Json = nlohmann::json;

inline Json multiindex_to_json(const MultiIndex& a) { return Json(a.exponents()); }

inline MultiIndex multiindex_from_json(const Json& j, std::size_t n)
{
    auto e = j.get<std::vector<unsigned>>();
    if (e.size() != n) throw DimensionError("multi-index length differs from n");
    return MultiIndex(std::move(e));
}

inline GaussianRational gaussian_from_strings(const Json& re, const Json& im)
{
    return {parse_rational(re.get<std::string>()), parse_rational(im.get<std::string>())};
}

inline Json form_to_json(const BihermitianForm& f)
{
    Json terms = Json::array();
    for (const auto& [key, c] : f.terms())
        terms.push_back({{"i", key.i + 1},
                         {"j", key.j + 1},
                         {"alpha", multiindex_to_json(key.alpha)},
                         {"beta", multiindex_to_json(key.beta)},
                         {"re", to_string(c.re)},
                         {"im", to_string(c.im)}});
    return {{"type", "form"}, {"n", f.n()}, {"r", f.r()}, {"terms", terms}};
}

inline BihermitianForm form_from_json(const Json& j)
{
    if (j.contains("type") && j.at("type") != "form") throw Error("JSON object is not a form");
    const std::size_t n = j.at("n").get<std::size_t>();
    const std::size_t r = j.value("r", std::size_t{1});
    BihermitianForm f(n, r);
    for (const auto& t : j.at("terms")) {
        const std::size_t i = t.at("i").get<std::size_t>(), jj = t.at("j").get<std::size_t>();
        if (i == 0 || jj == 0) throw DimensionError("form indices are 1-based");
        f.add_term(i - 1, jj - 1, multiindex_from_json(t.at("alpha"), n), multiindex_from_json(t.at("beta"), n),
                   gaussian_from_strings(t.at("re"), t.value("im", Json("0"))));
    }
    return f;
}

inline Json holo_to_json(const HoloPolyMatrix& a)
{
    Json weights = Json::array(), entries = Json::array();
    for (std::size_t k = 0; k < a.rows(); ++k) {
        weights.push_back(to_string(a.weight(k)));
        for (std::size_t c = 0; c < a.cols(); ++c)
            for (const auto& [alpha, v] : a(k, c).terms())
                entries.push_back({{"row", k + 1},
                                   {"col", c + 1},
                                   {"alpha", multiindex_to_json(alpha)},
                                   {"re", to_string(v.re)},
                                   {"im", to_string(v.im)}});
    }
    return {{"type", "holo_matrix"}, {"n", a.n()},        {"rows", a.rows()},
            {"cols", a.cols()},      {"weights", weights}, {"entries", entries}};
}

inline HoloPolyMatrix holo_from_json(const Json& j)
{
    if (j.contains("type") && j.at("type") != "holo_matrix") throw Error("JSON object is not a holo_matrix");
    const std::size_t n = j.at("n").get<std::size_t>();
    HoloPolyMatrix a(n, j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    if (j.contains("weights")) {
        const auto& w = j.at("weights");
        if (w.size() != a.rows()) throw DimensionError("one weight per row required");
        for (std::size_t k = 0; k < a.rows(); ++k) a.set_weight(k, parse_rational(w[k].get<std::string>()));
    }
    for (const auto& e : j.at("entries")) {
        const std::size_t row = e.at("row").get<std::size_t>(), col = e.at("col").get<std::size_t>();
        if (row == 0 || col == 0 || row > a.rows() || col > a.cols()) throw DimensionError("entry index out of range");
        a(row - 1, col - 1).add_term(multiindex_from_json(e.at("alpha"), n),
                                     gaussian_from_strings(e.at("re"), e.value("im", Json("0"))));
    }
    return a;
}

inline Json matrix_to_json(const Matrix& m)
{
    Json entries = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero()) entries.push_back({i, j, to_string(m(i, j).re), to_string(m(i, j).im)});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

inline Matrix matrix_from_json(const Json& j)
{
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    for (const auto& e : j.at("entries")) {
        const std::size_t r = e.at(0).get<std::size_t>(), c = e.at(1).get<std::size_t>();
        if (r >= m.rows() || c >= m.cols()) throw DimensionError("matrix entry out of range");
        m(r, c) = gaussian_from_strings(e.at(2), e.at(3));
    }
    return m;
}

inline Json vector_to_json(const Vector& v)
{
    Json out = Json::array();
    for (const auto& x : v) out.push_back({to_string(x.re), to_string(x.im)});
    return out;
}

inline Vector vector_from_json(const Json& j)
{
    Vector v;
    for (const auto& e : j) v.push_back(gaussian_from_strings(e.at(0), e.at(1)));
    return v;
}

inline Json inertia_to_json(const Inertia& in)
{
    return {{"positive", in.positive}, {"negative", in.negative}, {"zero", in.zero}};
}

inline Json certificate_to_json(const SignatureCertificate& c)
{
    Json transform = Json::array();
    for (const auto& row : c.transform) {
        Json r = Json::array();
        for (const auto& [col, v] : row) r.push_back({col, to_string(v.re), to_string(v.im)});
        transform.push_back(r);
    }
    Json d = Json::array();
    for (const auto& x : c.diagonal) d.push_back(to_string(x));
    return {{"type", "signature_certificate"},
            {"size", c.size()},
            {"matrix", matrix_to_json(c.source)},
            {"permutation", c.permutation},
            {"transform", transform},
            {"L", matrix_to_json(c.lower)},
            {"D", d},
            {"inertia", inertia_to_json(c.inertia)},
            {"mixing_steps", c.mixing_steps},
            {"witness", c.witness ? vector_to_json(*c.witness) : Json(nullptr)}};
}

inline SignatureCertificate certificate_from_json(const Json& j)
{
    if (j.at("type") != "signature_certificate") throw Error("JSON object is not a signature_certificate");
    SignatureCertificate c;
    const std::size_t n = j.at("size").get<std::size_t>();
    c.source = matrix_from_json(j.at("matrix"));
    c.permutation = j.at("permutation").get<std::vector<std::size_t>>();
    for (const auto& row : j.at("transform")) {
        SparseRow r;
        for (const auto& e : row) r.emplace_back(e.at(0).get<std::size_t>(), gaussian_from_strings(e.at(1), e.at(2)));
        c.transform.push_back(std::move(r));
    }
    c.lower = matrix_from_json(j.at("L"));
    for (const auto& x : j.at("D")) c.diagonal.push_back(parse_rational(x.get<std::string>()));
    if (c.diagonal.size() != n) throw DimensionError("D length differs from size");
    const auto& in = j.at("inertia");
    c.inertia = {in.at("positive").get<std::size_t>(), in.at("negative").get<std::size_t>(),
                 in.at("zero").get<std::size_t>()};
    c.mixing_steps = j.value("mixing_steps", std::size_t{0});
    if (j.contains("witness") && !j.at("witness").is_null()) c.witness = vector_from_json(j.at("witness"));
    return c;
}

inline Json factor_certificate_to_json(const WeightedGramFactor& w)
{
    return {{"type", "factor_certificate"}, {"target", form_to_json(w.target)}, {"factor", holo_to_json(w.rows)}};
}

inline WeightedGramFactor factor_certificate_from_json(const Json& j)
{
    if (j.at("type") != "factor_certificate") throw Error("JSON object is not a factor_certificate");
    return {holo_from_json(j.at("factor")), form_from_json(j.at("target"))};
}

}  // namespace hermfactor
