#include "weil/cli.hpp"
#include "weil/errors.hpp"
#include "weil/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <sstream>

namespace weil {

namespace {

struct Emitter {
    std::string format;
    unsigned precision;

    Json scalar(const ExactScalar& x) const {
        if (format == "exact") return scalar_to_json(x, 0);
        Json j = scalar_to_json(x, precision);
        if (format == "numeric") {
            j.erase("order");
            j.erase("coeffs");
        }
        return j;
    }

    Json op(const WeilOperator& m) const {
        Json rows = Json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            Json row = Json::array();
            for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(scalar(m(i, k)));
            rows.push_back(row);
        }
        return {{"dim", m.rows()}, {"entries", rows}};
    }
};

Json lattice_json(const LatticeData& ld) {
    Json gram = Json::array();
    const IntMatrix& G = ld.lattice().gram();
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < G.cols(); ++k) row.push_back(static_cast<long long>(G(i, k)));
        gram.push_back(row);
    }
    return {{"gram", gram},
            {"rank", ld.rank()},
            {"even", ld.is_even()},
            {"det", ld.lattice().det().str()},
            {"signature", ld.sgn()},
            {"level", ld.level()}};
}

Json matrix_json(const SL2Z& A) { return Json::array({Json::array({A.a, A.b}), Json::array({A.c, A.d})}); }

const SL2Z& need_matrix(const Request& req) {
    if (!req.matrix) throw ValidationError(req.command + ": --matrix is required");
    return *req.matrix;
}

long long need(const std::optional<long long>& v, const char* flag, const std::string& cmd) {
    if (!v) throw ValidationError(cmd + ": " + flag + " is required");
    return *v;
}

Json dispatch(const Request& req) {
    if (req.lattice.empty()) throw ValidationError("--lattice is required");
    if (req.eps != 1 && req.eps != -1) throw ValidationError("--eps must be 1 or -1");
    if (req.format != "exact" && req.format != "numeric" && req.format != "both")
        throw ValidationError("--format must be exact, numeric or both");
    const Emitter em{req.format, req.precision};
    const LatticeData ld(parse_lattice(req.lattice));
    Json doc = {{"command", req.command}, {"lattice", lattice_json(ld)}};

    if (req.command == "discform") {
        doc["form"] = form_to_json(ld.form());
    } else if (req.command == "jordan") {
        std::vector<long long> primes = ld.primes();
        if (req.prime) {
            if (!is_prime(*req.prime)) throw ValidationError("--prime must be prime");
            primes = {*req.prime};
        }
        Json decs = Json::array();
        for (long long p : primes) decs.push_back(jordan_to_json(ld.jordan(p)));
        doc["decompositions"] = decs;
        doc["weil_reciprocity"] = weil_reciprocity_check(ld);
    } else if (req.command == "milgram") {
        const ExactScalar s = milgram_sum(ld.form());
        doc["sum"] = em.scalar(s);
        doc["sgn"] = ld.sgn();
        doc["delta"] = ld.delta();
        doc["ok"] = s == zeta8(ld.sgn()) * sqrt_rat(Rational(ld.delta()));
    } else if (req.command == "rho") {
        const MpZElement x{need_matrix(req), req.eps};
        const WeilOperator m = rho(ld, x);
        doc["matrix"] = matrix_json(x.mat);
        doc["eps"] = x.eps;
        doc["word"] = word_string(ld.is_even() ? decompose_ST(x.mat) : decompose_T2S(x.mat));
        doc["operator"] = em.op(m);
        doc["oracle_agrees"] = m == rho_oracle(ld, x);
    } else if (req.command == "gauss") {
        const long long p = need(req.prime, "--prime", req.command);
        const long long a = need(req.a, "--a", req.command), c = need(req.c, "--c", req.command);
        if (!is_prime(p)) throw ValidationError("--prime must be prime");
        const ExactScalar closed = gauss_sum_closed(ld.jordan(p), ld.rank(), a, c);
        const ExactScalar brute = gauss_sum_brute(ld.lattice(), p, a, c);
        doc["p"] = p;
        doc["a"] = a;
        doc["c"] = c;
        doc["closed"] = em.scalar(closed);
        doc["brute"] = em.scalar(brute);
        doc["equal"] = closed == brute;
    } else if (req.command == "kernel") {
        const KernelDescriptor kd = kernel_descriptor(ld);
        doc["base_group"] = kd.base == KernelDescriptor::Gamma ? "Gamma" : "Gamma(N)";
        doc["cover"] = kd.lift ? "lift" : "double-cover";
        doc["N"] = kd.N;
        doc["Ntilde"] = kd.Ntilde;
        doc["m"] = kd.m;
        doc["gamma_f2_squared"] = em.scalar(kd.gamma2_sq);
        doc["v2_delta"] = kd.v2_delta;
        if (req.matrix) {
            const MpZElement x{*req.matrix, req.eps};
            doc["matrix"] = matrix_json(x.mat);
            doc["eps"] = x.eps;
            doc["in_base_group"] = in_kernel_base(kd, x.mat);
            doc["in_kernel"] = is_in_kernel(ld, x);
        }
    } else if (req.command == "verify") {
        Json suites = Json::array();
        bool ok = true;
        for (const SuiteResult& s : verify_lattice(ld)) {
            Json js = {{"name", s.name}, {"ok", s.ok}, {"skipped", s.skipped}, {"checks", s.checks}};
            if (!s.detail.empty()) js["detail"] = s.detail;
            suites.push_back(js);
            ok = ok && s.ok;
        }
        doc["suites"] = suites;
        doc["ok"] = ok;
    } else {
        throw ValidationError("unknown command '" + req.command + "'");
    }
    return doc;
}

void render(const Json& j, const std::string& indent, std::ostream& os);

bool is_scalar_json(const Json& j) { return j.is_object() && j.contains("text"); }

// arrays of numbers, or of arrays of numbers, fit on one line
bool is_flat(const Json& j) {
    if (!j.is_array()) return j.is_primitive();
    for (const auto& v : j)
        if (!(v.is_primitive() || (v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_primitive(); }))))
            return false;
    return true;
}

std::string scalar_text(const Json& j) {
    std::string s = j.at("text").get<std::string>();
    if (j.contains("numeric")) {
        std::ostringstream o;
        o << s << "  ~ " << j["numeric"]["re_mid"].get<double>() << " + " << j["numeric"]["im_mid"].get<double>()
          << "i";
        return o.str();
    }
    return s;
}

void render(const Json& j, const std::string& indent, std::ostream& os) {
    if (j.is_object() && j.contains("dim") && j.contains("entries")) {
        for (const auto& row : j["entries"]) {
            os << indent;
            for (const auto& e : row) os << "[" << e.value("text", std::string("?")) << "] ";
            os << "\n";
        }
        return;
    }
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (is_scalar_json(v)) {
                os << indent << k << ": " << scalar_text(v) << "\n";
            } else if (v.is_structured() && !is_flat(v)) {
                os << indent << k << ":\n";
                render(v, indent + "  ", os);
            } else {
                os << indent << k << ": " << v.dump() << "\n";
            }
        }
        return;
    }
    if (j.is_array()) {
        for (const auto& v : j) {
            if (v.is_structured()) {
                os << indent << "-\n";
                render(v, indent + "  ", os);
            } else {
                os << indent << "- " << v.dump() << "\n";
            }
        }
        return;
    }
    os << indent << j.dump() << "\n";
}

Json error_doc(const char* kind, const std::string& msg) {
    return {{"ok", false}, {"error", {{"kind", kind}, {"message", msg}}}};
}

}  // namespace

SL2Z parse_matrix(const std::string& text) {
    std::vector<long long> v;
    try {
        if (text.find('[') != std::string::npos) {
            Json j = Json::parse(text);
            for (const auto& row : j)
                for (const auto& x : row) v.push_back(x.get<long long>());
        } else {
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) v.push_back(std::stoll(item));
        }
    } catch (const std::exception& e) {
        throw ValidationError(std::string("matrix: cannot parse '") + text + "': " + e.what());
    }
    if (v.size() != 4) throw ValidationError("matrix: expected four entries a,b,c,d");
    return SL2Z::make(v[0], v[1], v[2], v[3]);
}

Response run(const Request& req) {
    Response r;
    try {
        r.doc = dispatch(req);
        if (req.command == "verify" && !r.doc["ok"].get<bool>()) r.exit_code = kInvariant;
    } catch (const ValidationError& e) {
        r = {error_doc("validation", e.what()), kValidation};
    } catch (const CapError& e) {
        r = {error_doc("cap", e.what()), kCap};
    } catch (const InvariantError& e) {
        r = {error_doc("invariant", e.what()), kInvariant};
    }
    return r;
}

std::string render_pretty(const Json& doc) {
    std::ostringstream os;
    render(doc, "", os);
    return os.str();
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weil representations of discriminant forms"};
    Request req;
    std::string matrix;
    app.add_option("command", req.command, "discform | jordan | milgram | rho | gauss | kernel | verify")
        ->required()
        ->check(CLI::IsMember({"discform", "jordan", "milgram", "rho", "gauss", "kernel", "verify"}));
    app.add_option("--lattice", req.lattice, "Gram matrix as JSON ({\"gram\": ...} or [[...]]) or a file");
    app.add_option("--matrix", matrix, "SL2(Z) element as a,b,c,d or [[a,b],[c,d]]");
    app.add_option("--eps", req.eps, "metaplectic sign, 1 or -1");
    app.add_option("--prime", req.prime, "prime p");
    app.add_option("--a", req.a, "Gauss sum numerator a");
    app.add_option("--c", req.c, "Gauss sum modulus c");
    app.add_option("--precision", req.precision, "bits for numeric enclosures")->check(CLI::Range(32u, 4096u));
    app.add_option("--format", req.format, "exact | numeric | both");
    app.add_flag("--pretty", req.pretty, "human-readable output");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kValidation;
    }
    Response r;
    try {
        if (!matrix.empty()) req.matrix = parse_matrix(matrix);
        r = run(req);
    } catch (const ValidationError& e) {
        r = {error_doc("validation", e.what()), kValidation};
    }
    if (req.pretty) out << render_pretty(r.doc);
    else out << r.doc.dump() << "\n";
    if (r.exit_code != kOk && r.doc.contains("error")) err << r.doc["error"]["message"].get<std::string>() << "\n";
    return r.exit_code;
}

}  // namespace weil
