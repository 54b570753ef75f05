// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#include "problem_text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace enfix::text {

void fail(const std::string& origin, std::size_t line, const std::string& message) {
    std::ostringstream os;
    os << origin << ':' << line << ": " << message;
    throw Error(ErrorCode::parse, os.str());
}

double Value::number() const {
    if (const auto* i = std::get_if<std::int64_t>(&data)) return static_cast<double>(*i);
    return std::get<double>(data);
}

namespace {

bool is_bare_key_char(char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Drops a trailing comment, respecting string literals.
std::string_view strip_comment(std::string_view s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char ch = s[i];
        if (in_string) {
            if (ch == '\\') ++i;
            else if (ch == '"') in_string = false;
        } else if (ch == '"') {
            in_string = true;
        } else if (ch == '#') {
            return s.substr(0, i);
        }
    }
    return s;
}

// Bracket depth change of a line, outside string literals.
int bracket_balance(std::string_view s) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char ch = s[i];
        if (in_string) {
            if (ch == '\\') ++i;
            else if (ch == '"') in_string = false;
        } else if (ch == '"') {
            in_string = true;
        } else if (ch == '[') {
            ++depth;
        } else if (ch == ']') {
            --depth;
        }
    }
    return depth;
}

class ValueParser {
public:
    ValueParser(std::string_view text, const std::string& origin, std::size_t line)
        : s_(text), origin_(origin), line_(line) {}

    Value parse_all() {
        Value v = parse_value();
        skip_ws();
        if (pos_ != s_.size()) error("unexpected trailing characters after value");
        return v;
    }

private:
    [[noreturn]] void error(const std::string& msg) const { fail(origin_, line_, msg); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    Value parse_value() {
        skip_ws();
        if (pos_ >= s_.size()) error("missing value");
        const char ch = s_[pos_];
        if (ch == '[') return parse_array();
        if (ch == '"') return parse_string();
        if (s_.substr(pos_, 4) == "true") {
            pos_ += 4;
            return Value{decltype(Value::data){std::in_place_type<bool>, true}, line_};
        }
        if (s_.substr(pos_, 5) == "false") {
            pos_ += 5;
            return Value{decltype(Value::data){std::in_place_type<bool>, false}, line_};
        }
        return parse_number();
    }

    Value parse_array() {
        ++pos_;  // '['
        Value::Array arr;
        for (;;) {
            skip_ws();
            if (pos_ >= s_.size()) error("unterminated array");
            if (s_[pos_] == ']') {
                ++pos_;
                break;
            }
            arr.items.push_back(parse_value());
            skip_ws();
            if (pos_ >= s_.size()) error("unterminated array");
            if (s_[pos_] == ',') {
                ++pos_;
            } else if (s_[pos_] != ']') {
                error("expected ',' or ']' in array");
            }
        }
        return Value{std::move(arr), line_};
    }

    Value parse_string() {
        ++pos_;  // opening quote
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            char ch = s_[pos_++];
            if (ch == '\\') {
                if (pos_ >= s_.size()) break;
                const char esc = s_[pos_++];
                switch (esc) {
                case '"': ch = '"'; break;
                case '\\': ch = '\\'; break;
                case 'n': ch = '\n'; break;
                case 't': ch = '\t'; break;
                default: error(std::string("unsupported escape \\") + esc);
                }
            }
            out.push_back(ch);
        }
        if (pos_ >= s_.size()) error("unterminated string");
        ++pos_;  // closing quote
        return Value{std::move(out), line_};
    }

    Value parse_number() {
        std::size_t end = pos_;
        while (end < s_.size() && s_[end] != ',' && s_[end] != ']' &&
               !std::isspace(static_cast<unsigned char>(s_[end])))
            ++end;
        std::string_view tok = s_.substr(pos_, end - pos_);
        if (tok.empty()) error("missing value");
        std::string_view digits = tok.front() == '+' ? tok.substr(1) : tok;
        const bool integral = digits.find_first_of(".eE") == std::string_view::npos;
        if (digits.empty() || !(std::isdigit(static_cast<unsigned char>(digits.front())) ||
                                digits.front() == '-' || digits.front() == '.'))
            error("invalid value '" + std::string(tok) + "'");
        pos_ = end;
        if (integral) {
            std::int64_t iv = 0;
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), iv);
            if (ec == std::errc() && p == digits.data() + digits.size()) return Value{iv, line_};
        }
        double dv = 0.0;
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), dv);
        if (ec != std::errc() || p != digits.data() + digits.size())
            error("invalid number '" + std::string(tok) + "'");
        if (!std::isfinite(dv)) error("number '" + std::string(tok) + "' is not finite");
        return Value{dv, line_};
    }

    std::string_view s_;
    const std::string& origin_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

}  // namespace

Document parse(std::string_view source, std::string origin) {
    Document doc;
    doc.origin = std::move(origin);
    std::vector<std::string_view> lines;
    for (std::size_t start = 0; start <= source.size();) {
        std::size_t nl = source.find('\n', start);
        if (nl == std::string_view::npos) nl = source.size();
        std::string_view ln = source.substr(start, nl - start);
        if (!ln.empty() && ln.back() == '\r') ln.remove_suffix(1);
        lines.push_back(ln);
        start = nl + 1;
    }

    Table* current = nullptr;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        std::string_view ln = trim(strip_comment(lines[i]));
        if (ln.empty()) continue;

        if (ln.front() == '[') {
            if (ln.back() != ']') fail(doc.origin, lineno, "malformed table header");
            std::string_view name = trim(ln.substr(1, ln.size() - 2));
            if (name.empty()) fail(doc.origin, lineno, "empty table name");
            bool dot_ok = false;
            for (char ch : name) {
                if (ch == '.') {
                    if (!dot_ok) fail(doc.origin, lineno, "malformed table name '" + std::string(name) + "'");
                    dot_ok = false;
                } else if (is_bare_key_char(ch)) {
                    dot_ok = true;
                } else {
                    fail(doc.origin, lineno, "invalid character in table name '" + std::string(name) + "'");
                }
            }
            if (!dot_ok) fail(doc.origin, lineno, "malformed table name '" + std::string(name) + "'");
            auto [it, inserted] = doc.tables.try_emplace(std::string(name));
            if (!inserted) fail(doc.origin, lineno, "duplicate table [" + std::string(name) + "]");
            it->second.line = lineno;
            current = &it->second;
            continue;
        }

        const auto eq = ln.find('=');
        if (eq == std::string_view::npos) fail(doc.origin, lineno, "expected 'key = value'");
        std::string_view key = trim(ln.substr(0, eq));
        if (key.empty()) fail(doc.origin, lineno, "missing key before '='");
        for (char ch : key)
            if (!is_bare_key_char(ch)) fail(doc.origin, lineno, "invalid key '" + std::string(key) + "'");
        if (!current) fail(doc.origin, lineno, "key '" + std::string(key) + "' appears before any [table]");

        // arrays may continue over following lines until brackets balance
        std::string value(trim(ln.substr(eq + 1)));
        int depth = bracket_balance(value);
        std::size_t j = i;
        while (depth > 0 && j + 1 < lines.size()) {
            ++j;
            std::string_view more = trim(strip_comment(lines[j]));
            value += ' ';
            value += more;
            depth += bracket_balance(more);
        }
        if (depth != 0) fail(doc.origin, lineno, "unbalanced brackets in value of '" + std::string(key) + "'");
        i = j;

        Value v = ValueParser(value, doc.origin, lineno).parse_all();
        auto [it, inserted] = current->entries.try_emplace(std::string(key), std::move(v));
        if (!inserted) fail(doc.origin, lineno, "duplicate key '" + std::string(key) + "'");
    }
    return doc;
}

}  // namespace enfix::text
