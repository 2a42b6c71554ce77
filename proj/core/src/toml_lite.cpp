#include "rftrack/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace rftrack {
namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw std::runtime_error("toml parse error at line " + std::to_string(line) +
                             ": " + what);
}

std::string strip(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// remove a trailing comment that is not inside a string literal
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

nlohmann::json parse_scalar(const std::string& tok, int line) {
    if (tok.empty()) fail(line, "empty value");
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"')
            fail(line, "unterminated string");
        std::string out;
        for (size_t i = 1; i + 1 < tok.size(); ++i) {
            if (tok[i] == '\\' && i + 2 < tok.size()) {
                ++i;
                switch (tok[i]) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    default: fail(line, "unsupported escape");
                }
            } else {
                out += tok[i];
            }
        }
        return out;
    }
    if (tok == "true") return true;
    if (tok == "false") return false;
    // integer unless it has a float marker
    if (tok.find_first_of(".eE") == std::string::npos ||
        tok.find("0x") == 0) {
        try {
            size_t pos = 0;
            long long v = std::stoll(tok, &pos);
            if (pos == tok.size()) return v;
        } catch (...) {
        }
    }
    try {
        size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos == tok.size()) return v;
    } catch (...) {
    }
    fail(line, "unrecognized value '" + tok + "'");
}

nlohmann::json parse_value(const std::string& raw, int line) {
    std::string v = strip(raw);
    if (!v.empty() && v.front() == '[') {
        if (v.back() != ']') fail(line, "unterminated array");
        nlohmann::json arr = nlohmann::json::array();
        std::string body = v.substr(1, v.size() - 2);
        std::string tok;
        bool in_str = false;
        for (char c : body) {
            if (c == '"') in_str = !in_str;
            if (c == ',' && !in_str) {
                std::string t = strip(tok);
                if (!t.empty()) arr.push_back(parse_scalar(t, line));
                tok.clear();
            } else {
                tok += c;
            }
        }
        std::string t = strip(tok);
        if (!t.empty()) arr.push_back(parse_scalar(t, line));
        return arr;
    }
    return parse_scalar(v, line);
}

nlohmann::json* descend(nlohmann::json& root, const std::string& dotted,
                        int line) {
    nlohmann::json* cur = &root;
    std::stringstream ss(dotted);
    std::string part;
    while (std::getline(ss, part, '.')) {
        part = strip(part);
        if (part.empty()) fail(line, "empty table-name component");
        cur = &(*cur)[part];
    }
    return cur;
}

}  // namespace

nlohmann::json parse_toml(const std::string& text) {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = strip(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "unterminated table header");
            std::string name = strip(s.substr(1, s.size() - 2));
            if (name.empty()) fail(line, "empty table name");
            table = descend(root, name, line);
            if (!table->is_object() && !table->is_null())
                fail(line, "table redefines a key");
            if (table->is_null()) *table = nlohmann::json::object();
            continue;
        }
        size_t eq = std::string::npos;
        bool in_str = false;
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"') in_str = !in_str;
            if (s[i] == '=' && !in_str) { eq = i; break; }
        }
        if (eq == std::string::npos) fail(line, "expected key = value");
        std::string key = strip(s.substr(0, eq));
        if (key.empty()) fail(line, "empty key");
        (*descend(*table, key, line)) = parse_value(s.substr(eq + 1), line);
    }
    return root;
}

namespace {

void emit_scalar(std::ostream& os, const nlohmann::json& v) {
    if (v.is_string()) {
        os << '"';
        for (char c : v.get<std::string>()) {
            if (c == '"' || c == '\\') os << '\\';
            os << c;
        }
        os << '"';
    } else if (v.is_number_float()) {
        char buf[40];
        auto [p, ec] = std::to_chars(buf, buf + sizeof(buf),
                                     v.get<double>(),
                                     std::chars_format::general, 17);
        (void)ec;
        std::string t(buf, p);
        if (t.find_first_of(".eEn") == std::string::npos) t += ".0";
        os << t;
    } else {
        os << v.dump();
    }
}

}  // namespace

std::string to_toml(const nlohmann::json& doc) {
    std::ostringstream os;
    // top-level scalars first, then tables
    for (auto& [k, v] : doc.items()) {
        if (v.is_object()) continue;
        os << k << " = ";
        if (v.is_array()) {
            os << '[';
            for (size_t i = 0; i < v.size(); ++i) {
                if (i) os << ", ";
                emit_scalar(os, v[i]);
            }
            os << ']';
        } else {
            emit_scalar(os, v);
        }
        os << '\n';
    }
    for (auto& [k, v] : doc.items()) {
        if (!v.is_object()) continue;
        os << '[' << k << "]\n";
        for (auto& [k2, v2] : v.items()) {
            os << k2 << " = ";
            if (v2.is_array()) {
                os << '[';
                for (size_t i = 0; i < v2.size(); ++i) {
                    if (i) os << ", ";
                    emit_scalar(os, v2[i]);
                }
                os << ']';
            } else {
                emit_scalar(os, v2);
            }
            os << '\n';
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace rftrack
