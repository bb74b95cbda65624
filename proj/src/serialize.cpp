#include "weil/serialize.hpp"
#include "weil/errors.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace weil {

Json scalar_to_json(const ExactScalar& x, unsigned precision_bits) {
    Json j;
    j["order"] = x.order();
    Json cs = Json::array();
    for (const auto& c : x.coeffs()) cs.push_back(to_string(c));
    j["coeffs"] = cs;
    j["text"] = x.to_string();
    if (precision_bits > 0) {
        const ComplexInterval ci = eval_numeric(x, precision_bits);
        j["numeric"] = {{"re", {ci.re_lo, ci.re_hi}},
                        {"im", {ci.im_lo, ci.im_hi}},
                        {"re_mid", ci.re_mid},
                        {"im_mid", ci.im_mid},
                        {"bits", precision_bits}};
    }
    return j;
}

ExactScalar scalar_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("order") || !j.contains("coeffs"))
        throw ValidationError("scalar json needs 'order' and 'coeffs'");
    const int order = j.at("order").get<int>();
    if (order < 1) throw ValidationError("scalar json: order must be positive");
    std::vector<Rational> cs;
    for (const auto& c : j.at("coeffs")) {
        if (c.is_string()) cs.push_back(parse_rational(c.get<std::string>()));
        else if (c.is_number_integer()) cs.emplace_back(c.get<long long>());
        else throw ValidationError("scalar json: coefficient must be a rational string");
    }
    return ExactScalar::from_coeffs(order, cs);
}

Json operator_to_json(const WeilOperator& m, unsigned precision_bits) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(scalar_to_json(m(i, k), precision_bits));
        rows.push_back(row);
    }
    return {{"dim", m.rows()}, {"entries", rows}};
}

WeilOperator operator_from_json(const Json& j) {
    const auto dim = j.at("dim").get<Eigen::Index>();
    WeilOperator m(dim, dim);
    const Json& rows = j.at("entries");
    if (static_cast<Eigen::Index>(rows.size()) != dim) throw ValidationError("operator json: wrong row count");
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Json& row = rows.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != dim) throw ValidationError("operator json: wrong row length");
        for (Eigen::Index k = 0; k < dim; ++k) m(i, k) = scalar_from_json(row.at(static_cast<std::size_t>(k)));
    }
    return m;
}

Json form_to_json(const DiscriminantForm& D) {
    Json elements = Json::array();
    for (std::size_t i = 0; i < D.size(); ++i)
        elements.push_back({{"coords", D.element(i).coords}, {"q", to_string(D.q(i))}});
    Json bgen = Json::array();
    for (std::size_t i = 0; i < D.orders().size(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < D.orders().size(); ++k) row.push_back(to_string(D.bilinear_gen(i, k)));
        bgen.push_back(row);
    }
    return {{"orders", D.orders()},   {"delta", D.delta()},       {"signature", D.signature()},
            {"level", D.level()},     {"exponent", D.exponent()}, {"even", D.is_even()},
            {"bilinear", bgen},       {"elements", elements}};
}

std::string jordan_symbol(const JordanDecomposition& jd) {
    std::string s;
    for (const auto& c : jd.components) {
        if (!s.empty()) s += " ";
        s += c.symbol();
    }
    return s;
}

Json jordan_to_json(const JordanDecomposition& jd) {
    Json comps = Json::array();
    for (const auto& c : jd.components) {
        Json jc = {{"q", c.q()}, {"n", c.n}, {"eps", c.eps}, {"symbol", c.symbol()}};
        if (jd.p == 2) {
            jc["odd"] = c.odd;
            if (c.odd) jc["t"] = c.t;
        }
        comps.push_back(jc);
    }
    return {{"p", jd.p}, {"symbol", jordan_symbol(jd)}, {"components", comps},
            {"weil_index", scalar_to_json(weil_index_lattice(jd))}};
}

GramLattice lattice_from_json(const Json& j) {
    const Json& g = j.is_object() ? j.at("gram") : j;
    if (!g.is_array() || g.empty()) throw ValidationError("lattice: gram must be a non-empty array of rows");
    std::vector<std::vector<long long>> rows;
    for (const auto& r : g) {
        if (!r.is_array() || r.size() != g.size()) throw ValidationError("lattice: gram must be square");
        std::vector<long long> row;
        for (const auto& x : r) {
            if (!x.is_number_integer()) throw ValidationError("lattice: entries must be integers");
            row.push_back(x.get<long long>());
        }
        rows.push_back(row);
    }
    return GramLattice::from_rows(rows);
}

GramLattice parse_lattice(const std::string& text_or_path) {
    std::string text = text_or_path;
    std::error_code ec;
    if (std::filesystem::is_regular_file(text_or_path, ec)) {
        std::ifstream in(text_or_path);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ValidationError(std::string("lattice: invalid JSON: ") + e.what());
    }
    try {
        return lattice_from_json(j);
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("lattice: ") + e.what());
    }
}

}  // namespace weil
