#pragma once

// Parameter files, float formatting and atomic file output.
//
// Parameter files are flat `key = value` lines. `#` starts a comment, blank
// lines are ignored, keys are s_m1, s_m2, s_b, lambda, alpha, beta. Keys not
// present keep their defaults.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <unistd.h>
#include <vector>

#include "langcomp/errors.hpp"
#include "langcomp/linalg.hpp"
#include "langcomp/model.hpp"

namespace langcomp::io {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

/// Whole-string decimal parse; anything left over is an error.
inline double parse_double(std::string_view text, std::string_view what = "value") {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ValidationError("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

/// Comma-separated list of numbers, e.g. "0.5,0.3,0.2".
inline std::vector<double> parse_list(std::string_view text, std::string_view what = "list") {
    std::vector<double> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(parse_double(text.substr(0, comma), what));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

inline std::map<std::string, double> parse_key_values(std::string_view text) {
    std::map<std::string, double> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ValidationError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw ValidationError("line " + std::to_string(line_no) + ": empty key");
        if (out.count(key)) throw ValidationError("line " + std::to_string(line_no) + ": duplicate key " + key);
        out[key] = parse_double(line.substr(eq + 1), key);
    }
    return out;
}

/// Sets one named model parameter. Unknown names are validation errors.
inline void set_param(ModelParams& p, const std::string& key, double v) {
    if (key == "s_m1") p.s_m1 = v;
    else if (key == "s_m2") p.s_m2 = v;
    else if (key == "s_b") p.s_b = v;
    else if (key == "lambda") p.lambda = v;
    else if (key == "alpha") p.alpha = v;
    else if (key == "beta") p.beta = v;
    else throw ValidationError("unknown parameter '" + key + "'");
}

inline ModelParams parse_params(std::string_view text, ModelParams base = {}) {
    for (const auto& [k, v] : parse_key_values(text)) set_param(base, k, v);
    return base;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ModelParams load_params(const std::filesystem::path& path, ModelParams base = {}) {
    return parse_params(read_file(path), base);
}

/// 17 significant digits, enough to round-trip any double.
inline std::string fmt(double v) {
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

inline std::string format_params(const ModelParams& p) {
    std::string out;
    out += "s_m1 = " + fmt(p.s_m1) + "\n";
    out += "s_m2 = " + fmt(p.s_m2) + "\n";
    out += "s_b = " + fmt(p.s_b) + "\n";
    out += "lambda = " + fmt(p.lambda) + "\n";
    out += "alpha = " + fmt(p.alpha) + "\n";
    out += "beta = " + fmt(p.beta) + "\n";
    return out;
}

/// CSV with a single header row. Rows are appended as numbers.
class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i) out_ += (i ? "," : "") + header[i];
        out_ += '\n';
        cols_ = header.size();
    }

    void row(std::initializer_list<double> values) {
        if (values.size() != cols_) throw std::logic_error("csv row width mismatch");
        bool first = true;
        for (double v : values) {
            if (!first) out_ += ',';
            out_ += fmt(v);
            first = false;
        }
        out_ += '\n';
    }

    /// Row with text cells (already formatted).
    void row_text(const std::vector<std::string>& cells) {
        if (cells.size() != cols_) throw std::logic_error("csv row width mismatch");
        for (std::size_t i = 0; i < cells.size(); ++i) out_ += (i ? "," : "") + cells[i];
        out_ += '\n';
    }

    const std::string& str() const { return out_; }

private:
    std::string out_;
    std::size_t cols_ = 0;
};

/// Writes to a sibling temp file, then renames over the target.
inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

}  // namespace langcomp::io
