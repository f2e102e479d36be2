#include "mgs/toml.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mgs/error.hpp"

namespace mgs::toml {

namespace {

[[noreturn]] void fail(std::string_view origin, int line, int column, const std::string& msg) {
    throw Error(std::string(origin) + ":" + std::to_string(line) + ":" + std::to_string(column) +
                ": " + msg);
}

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

// Cursor over one logical line.
struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    std::string_view origin;
    int line = 0;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    int column() const { return static_cast<int>(pos) + 1; }

    void skip_ws() {
        while (!done() && (peek() == ' ' || peek() == '\t'))
            ++pos;
    }

    [[noreturn]] void fail_here(const std::string& msg) const { fail(origin, line, column(), msg); }
};

std::string parse_basic_string(Cursor& c) {
    // opening quote already consumed by caller? no: c.peek() == '"'
    const int start_col = c.column();
    ++c.pos;
    std::string out;
    while (true) {
        if (c.done())
            fail(c.origin, c.line, start_col, "unterminated string");
        const char ch = c.text[c.pos++];
        if (ch == '"')
            return out;
        if (ch == '\\') {
            if (c.done())
                fail(c.origin, c.line, start_col, "unterminated escape in string");
            const char esc = c.text[c.pos++];
            switch (esc) {
            case '"': out.push_back('"'); break;
            case '\\': out.push_back('\\'); break;
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case 'r': out.push_back('\r'); break;
            default:
                fail(c.origin, c.line, c.column() - 1, std::string("unsupported escape '\\") + esc + "'");
            }
        } else {
            out.push_back(ch);
        }
    }
}

Value parse_value(Cursor& c); // fwd

Value parse_array(Cursor& c) {
    Value v;
    v.kind = Value::Kind::array;
    v.line = c.line;
    v.column = c.column();
    ++c.pos; // '['
    c.skip_ws();
    if (!c.done() && c.peek() == ']') {
        ++c.pos;
        return v;
    }
    while (true) {
        c.skip_ws();
        if (c.done())
            c.fail_here("unterminated array");
        v.array_v.push_back(parse_value(c));
        c.skip_ws();
        if (c.done())
            c.fail_here("unterminated array");
        if (c.peek() == ',') {
            ++c.pos;
            continue;
        }
        if (c.peek() == ']') {
            ++c.pos;
            return v;
        }
        c.fail_here("expected ',' or ']' in array");
    }
}

Value parse_scalar(Cursor& c) {
    Value v;
    v.line = c.line;
    v.column = c.column();
    const std::size_t start = c.pos;
    while (!c.done() && c.peek() != ',' && c.peek() != ']' && c.peek() != ' ' && c.peek() != '\t')
        ++c.pos;
    const std::string_view token = c.text.substr(start, c.pos - start);
    if (token.empty())
        fail(c.origin, c.line, v.column, "expected a value");
    if (token == "true" || token == "false") {
        v.kind = Value::Kind::boolean;
        v.bool_v = token == "true";
        return v;
    }
    const bool looks_integer =
        std::all_of(token.begin(), token.end(),
                    [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }) ||
        ((token[0] == '+' || token[0] == '-') && token.size() > 1 &&
         std::all_of(token.begin() + 1, token.end(),
                     [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }));
    if (looks_integer) {
        std::int64_t iv = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), iv);
        if (ec != std::errc{} || ptr != token.data() + token.size())
            fail(c.origin, c.line, v.column, "invalid integer '" + std::string(token) + "'");
        v.kind = Value::Kind::integer;
        v.int_v = iv;
        return v;
    }
    double dv = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), dv);
    if (ec == std::errc{} && ptr == token.data() + token.size() && std::isfinite(dv)) {
        v.kind = Value::Kind::floating;
        v.float_v = dv;
        return v;
    }
    fail(c.origin, c.line, v.column, "invalid value '" + std::string(token) + "'");
}

Value parse_value(Cursor& c) {
    if (c.done())
        c.fail_here("expected a value");
    if (c.peek() == '"') {
        Value v;
        v.kind = Value::Kind::string;
        v.line = c.line;
        v.column = c.column();
        v.string_v = parse_basic_string(c);
        return v;
    }
    if (c.peek() == '[')
        return parse_array(c);
    return parse_scalar(c);
}

std::string parse_key_path(Cursor& c) {
    std::string key;
    while (true) {
        const std::size_t start = c.pos;
        while (!c.done() && is_bare_key_char(c.peek()))
            ++c.pos;
        if (c.pos == start)
            c.fail_here("expected a key");
        key.append(c.text.substr(start, c.pos - start));
        if (!c.done() && c.peek() == '.') {
            key.push_back('.');
            ++c.pos;
            continue;
        }
        return key;
    }
}

// Strips a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (in_string) {
            if (ch == '\\')
                ++i;
            else if (ch == '"')
                in_string = false;
        } else if (ch == '"') {
            in_string = true;
        } else if (ch == '#') {
            return line.substr(0, i);
        }
    }
    return line;
}

} // namespace

const Value* Document::find(std::string_view key) const {
    for (const Entry& e : entries)
        if (e.key == key)
            return &e.value;
    return nullptr;
}

Document parse_string(std::string_view text, std::string_view origin) {
    Document doc;
    doc.origin = origin;
    std::string prefix;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                              : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!raw.empty() && raw.back() == '\r')
            raw.remove_suffix(1);
        raw = strip_comment(raw);

        Cursor c{raw, 0, origin, line_no};
        c.skip_ws();
        if (c.done())
            continue;
        if (c.peek() == '[') {
            ++c.pos;
            c.skip_ws();
            prefix = parse_key_path(c);
            c.skip_ws();
            if (c.done() || c.peek() != ']')
                c.fail_here("expected ']' to close table header");
            ++c.pos;
            c.skip_ws();
            if (!c.done())
                c.fail_here("unexpected text after table header");
            continue;
        }
        const std::string key = parse_key_path(c);
        c.skip_ws();
        if (c.done() || c.peek() != '=')
            c.fail_here("expected '=' after key '" + key + "'");
        ++c.pos;
        c.skip_ws();
        Value value = parse_value(c);
        c.skip_ws();
        if (!c.done())
            c.fail_here("unexpected text after value");

        const std::string full = prefix.empty() ? key : prefix + "." + key;
        if (doc.find(full) != nullptr)
            fail(origin, line_no, 1, "duplicate key '" + full + "'");
        doc.entries.push_back(Entry{full, std::move(value)});
    }
    return doc;
}

Document parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open config file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path.string());
}

const Value* Reader::take(std::string_view key) {
    const Value* v = doc_.find(key);
    if (v != nullptr)
        consumed_.emplace(key);
    return v;
}

void Reader::type_error(std::string_view key, const Value& v, std::string_view expected) const {
    fail(doc_.origin, v.line, v.column,
         "key '" + std::string(key) + "' must be " + std::string(expected));
}

std::int64_t Reader::get_int(std::string_view key, std::int64_t fallback) {
    const Value* v = take(key);
    if (v == nullptr)
        return fallback;
    if (v->kind != Value::Kind::integer)
        type_error(key, *v, "an integer");
    return v->int_v;
}

double Reader::get_double(std::string_view key, double fallback) {
    const Value* v = take(key);
    if (v == nullptr)
        return fallback;
    if (v->kind == Value::Kind::integer)
        return static_cast<double>(v->int_v);
    if (v->kind != Value::Kind::floating)
        type_error(key, *v, "a number");
    return v->float_v;
}

bool Reader::get_bool(std::string_view key, bool fallback) {
    const Value* v = take(key);
    if (v == nullptr)
        return fallback;
    if (v->kind != Value::Kind::boolean)
        type_error(key, *v, "true or false");
    return v->bool_v;
}

std::string Reader::get_string(std::string_view key, std::string_view fallback) {
    const Value* v = take(key);
    if (v == nullptr)
        return std::string(fallback);
    if (v->kind != Value::Kind::string)
        type_error(key, *v, "a string");
    return v->string_v;
}

std::vector<std::string> Reader::get_string_array(std::string_view key,
                                                  std::vector<std::string> fallback) {
    const Value* v = take(key);
    if (v == nullptr)
        return fallback;
    if (v->kind != Value::Kind::array)
        type_error(key, *v, "an array of strings");
    std::vector<std::string> out;
    for (const Value& item : v->array_v) {
        if (item.kind != Value::Kind::string)
            type_error(key, item, "an array of strings");
        out.push_back(item.string_v);
    }
    return out;
}

std::vector<double> Reader::get_double_array(std::string_view key, std::vector<double> fallback) {
    const Value* v = take(key);
    if (v == nullptr)
        return fallback;
    if (v->kind != Value::Kind::array)
        type_error(key, *v, "an array of numbers");
    std::vector<double> out;
    for (const Value& item : v->array_v) {
        if (item.kind == Value::Kind::integer)
            out.push_back(static_cast<double>(item.int_v));
        else if (item.kind == Value::Kind::floating)
            out.push_back(item.float_v);
        else
            type_error(key, item, "an array of numbers");
    }
    return out;
}

void Reader::reject_unknown_keys() const {
    for (const Entry& e : doc_.entries) {
        if (consumed_.find(e.key) == consumed_.end())
            fail(doc_.origin, e.value.line, 1, "unknown key '" + e.key + "'");
    }
}

} // namespace mgs::toml
