#include "filtsens/spec_document.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "filtsens/error.hpp"

namespace filtsens {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::SchemaError, path + ": " + what);
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) schema(path.empty() ? key : path + "." + key, "missing required field");
    return *it;
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const auto k : known) ok = ok || key == k;
        if (!ok) schema(path.empty() ? key : path + "." + key, "unknown field");
    }
}

double real_number(const json& v, const std::string& path) {
    if (!v.is_number()) schema(path, "expected a real number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) schema(path, "expected a finite number");
    return x;
}

std::vector<cplx> root_list(const json& v, const std::string& path) {
    if (!v.is_array()) schema(path, "expected a list of [re, im] pairs");
    std::vector<cplx> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string at = path + "[" + std::to_string(i) + "]";
        const json& pair = v[i];
        if (!pair.is_array() || pair.size() != 2) schema(at, "expected a [re, im] pair");
        out.emplace_back(real_number(pair[0], at + "[0]"), real_number(pair[1], at + "[1]"));
    }
    if (const long k = find_unpaired_root(out); k >= 0) {
        const cplx r = out[static_cast<std::size_t>(k)];
        std::ostringstream os;
        os << "root [" << r.real() << ", " << r.imag() << "] at index " << k << " has no conjugate partner";
        schema(path, os.str());
    }
    return out;
}

RationalTF transfer_function(const json& v, const std::string& path, TimeDomain domain) {
    if (!v.is_object()) schema(path, "expected an object with gain, zeros and poles");
    reject_unknown(v, {"gain", "zeros", "poles"}, path);
    const double gain = real_number(member(v, "gain", path), path + ".gain");
    auto zeros = root_list(member(v, "zeros", path), path + ".zeros");
    auto poles = root_list(member(v, "poles", path), path + ".poles");
    if (zeros.size() > poles.size()) {
        schema(path, "improper transfer function (" + std::to_string(zeros.size()) + " zeros, " +
                         std::to_string(poles.size()) + " poles)");
    }
    return RationalTF(gain, std::move(zeros), std::move(poles), domain);
}

double positive(const json& obj, const char* key, double fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    const std::string path = std::string("options.") + key;
    const double x = real_number(*it, path);
    if (!(x > 0.0)) schema(path, "must be positive");
    return x;
}

bool flag(const json& obj, const char* key, bool fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_boolean()) schema(std::string("options.") + key, "expected true or false");
    return it->get<bool>();
}

std::string locate(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

SystemSpecDocument parse_spec(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // byte is one past the offending character.
        const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
        std::string what = e.what();
        if (const auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
        throw Error(ErrorCode::ParseError, locate(text, at) + ": " + what);
    }
    if (!doc.is_object()) schema("(document)", "expected a JSON object");
    reject_unknown(doc, {"domain", "gx", "gy", "f", "options"}, "");

    const json& d = member(doc, "domain", "");
    if (!d.is_string() || (d != "ct" && d != "dt")) schema("domain", "expected \"ct\" or \"dt\"");
    const TimeDomain domain = d == "ct" ? TimeDomain::Continuous : TimeDomain::Discrete;

    AnalysisOptions options;
    if (const auto it = doc.find("options"); it != doc.end()) {
        const json& o = *it;
        if (!o.is_object()) schema("options", "expected an object");
        reject_unknown(o, {"eps_cancel", "eps_class", "eps_gain", "quad_tol", "run_quadrature", "run_lemma1"},
                       "options");
        options.tol.eps_cancel = positive(o, "eps_cancel", options.tol.eps_cancel);
        options.tol.eps_class = positive(o, "eps_class", options.tol.eps_class);
        options.tol.eps_gain = positive(o, "eps_gain", options.tol.eps_gain);
        options.quad_tol = positive(o, "quad_tol", options.quad_tol);
        options.run_quadrature = flag(o, "run_quadrature", options.run_quadrature);
        options.run_lemma1 = flag(o, "run_lemma1", options.run_lemma1);
    }

    return SystemSpecDocument{domain,
                              transfer_function(member(doc, "gx", ""), "gx", domain),
                              transfer_function(member(doc, "gy", ""), "gy", domain),
                              transfer_function(member(doc, "f", ""), "f", domain),
                              options};
}

SystemSpecDocument load_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_spec(buf.str());
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

}  // namespace filtsens
