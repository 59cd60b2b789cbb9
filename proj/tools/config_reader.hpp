#ifndef DIMFREE_TOOLS_CONFIG_READER_HPP
#define DIMFREE_TOOLS_CONFIG_READER_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "runner.hpp"

namespace dimfree::cli {

using nlohmann::json;

// Typed access to one JSON object. Every key read is recorded; finish() rejects the rest.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    [[noreturn]] static void fail(const std::string& where, const std::string& what) {
        throw ConfigError(where + ": " + what);
    }

    std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) fail(where(key), "missing required key");
        return j_.at(key);
    }

    double number(const std::string& key, std::optional<double> def, double lo, double hi, bool lo_open = false) {
        if (!has(key)) {
            if (!def) fail(where(key), "missing required key");
            return *def;
        }
        return check_number(j_.at(key), where(key), lo, hi, lo_open);
    }

    static double check_number(const json& v, const std::string& w, double lo, double hi, bool lo_open = false) {
        if (!v.is_number()) fail(w, "expected a number");
        double x = v.get<double>();
        if (!std::isfinite(x)) fail(w, "must be finite");
        if (lo_open ? !(x > lo) : !(x >= lo)) fail(w, "must be " + std::string(lo_open ? "> " : ">= ") + fmt(lo));
        if (x > hi) fail(w, "must be <= " + fmt(hi));
        return x;
    }

    long long integer(const std::string& key, std::optional<long long> def, long long lo, long long hi) {
        if (!has(key)) {
            if (!def) fail(where(key), "missing required key");
            return *def;
        }
        return check_integer(j_.at(key), where(key), lo, hi);
    }

    static long long check_integer(const json& v, const std::string& w, long long lo, long long hi) {
        if (!v.is_number_integer()) fail(w, "expected an integer");
        if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(hi))
            fail(w, "must be <= " + std::to_string(hi));
        long long x = v.get<long long>();
        if (x < lo || x > hi) fail(w, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return x;
    }

    bool boolean(const std::string& key, bool def) {
        if (!has(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_boolean()) fail(where(key), "expected true or false");
        return v.get<bool>();
    }

    std::string choice(const std::string& key, const std::string& def, std::initializer_list<const char*> options) {
        if (!has(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_string()) fail(where(key), "expected a string");
        std::string s = v.get<std::string>();
        std::string list;
        for (const char* o : options) {
            if (s == o) return s;
            list += list.empty() ? o : std::string(", ") + o;
        }
        fail(where(key), "unknown value '" + s + "' (expected one of " + list + ")");
    }

    std::vector<double> number_list(const std::string& key, std::optional<std::vector<double>> def, double lo,
                                    double hi, bool lo_open = false) {
        if (!has(key)) {
            if (!def) fail(where(key), "missing required key");
            return *def;
        }
        const json& v = j_.at(key);
        if (!v.is_array() || v.empty()) fail(where(key), "expected a non-empty array of numbers");
        std::vector<double> out;
        for (size_t i = 0; i < v.size(); ++i)
            out.push_back(check_number(v[i], where(key) + "[" + std::to_string(i) + "]", lo, hi, lo_open));
        return out;
    }

    std::vector<long long> integer_list(const std::string& key, std::optional<std::vector<long long>> def,
                                        long long lo, long long hi) {
        if (!has(key)) {
            if (!def) fail(where(key), "missing required key");
            return *def;
        }
        const json& v = j_.at(key);
        if (!v.is_array() || v.empty()) fail(where(key), "expected a non-empty array of integers");
        std::vector<long long> out;
        for (size_t i = 0; i < v.size(); ++i)
            out.push_back(check_integer(v[i], where(key) + "[" + std::to_string(i) + "]", lo, hi));
        return out;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) fail(where(it.key()), "unknown key");
    }

private:
    static std::string fmt(double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%g", v);
        return buf;
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

} // namespace dimfree::cli

#endif
