#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mgs::toml {

// Minimal TOML subset: `[table]` headers, `key = value` pairs with string,
// integer, float, boolean and single-line array values, `#` comments. Keys are
// flattened to their dotted path. Enough for scenario files while keeping
// parsing bit-exact and dependency-free.
struct Value {
    enum class Kind { integer, floating, boolean, string, array };
    Kind kind = Kind::integer;
    std::int64_t int_v = 0;
    double float_v = 0.0;
    bool bool_v = false;
    std::string string_v;
    std::vector<Value> array_v;
    int line = 0;
    int column = 0;
};

struct Entry {
    std::string key; // full dotted path
    Value value;
};

struct Document {
    std::string origin; // file name for diagnostics
    std::vector<Entry> entries;

    const Value* find(std::string_view key) const;
};

Document parse_string(std::string_view text, std::string_view origin);
Document parse_file(const std::filesystem::path& path);

// Typed access over a Document that records which keys were read, so unknown
// (misspelled) keys can be rejected after loading.
class Reader {
public:
    explicit Reader(Document doc) : doc_(std::move(doc)) {}

    bool has(std::string_view key) const { return doc_.find(key) != nullptr; }

    std::int64_t get_int(std::string_view key, std::int64_t fallback);
    double get_double(std::string_view key, double fallback);
    bool get_bool(std::string_view key, bool fallback);
    std::string get_string(std::string_view key, std::string_view fallback);
    std::vector<std::string> get_string_array(std::string_view key,
                                              std::vector<std::string> fallback);
    std::vector<double> get_double_array(std::string_view key, std::vector<double> fallback);

    // Throws if any key in the document was never read.
    void reject_unknown_keys() const;

    const std::string& origin() const { return doc_.origin; }

private:
    const Value* take(std::string_view key);
    [[noreturn]] void type_error(std::string_view key, const Value& v, std::string_view expected) const;

    Document doc_;
    std::set<std::string, std::less<>> consumed_;
};

} // namespace mgs::toml
