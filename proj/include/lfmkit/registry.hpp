#pragma once

#include <array>
#include <compare>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lfmkit/csv.hpp"
#include "lfmkit/error.hpp"
#include "lfmkit/series.hpp"
#include "lfmkit/validate.hpp"

namespace lfmkit {

enum class Variable { labor_force, cpi_inflation, gdp_deflator, unemployment, population };
enum class Source { oecd, eurostat, nac, us_def, ipss, user };

inline constexpr std::array<std::pair<Variable, std::string_view>, 5> kVariableNames{{
    {Variable::labor_force, "labor_force"},
    {Variable::cpi_inflation, "cpi_inflation"},
    {Variable::gdp_deflator, "gdp_deflator"},
    {Variable::unemployment, "unemployment"},
    {Variable::population, "population"},
}};

inline constexpr std::array<std::pair<Source, std::string_view>, 6> kSourceNames{{
    {Source::oecd, "oecd"},
    {Source::eurostat, "eurostat"},
    {Source::nac, "nac"},
    {Source::us_def, "us_def"},
    {Source::ipss, "ipss"},
    {Source::user, "user"},
}};

[[nodiscard]] inline std::string_view to_string(Variable v) {
    for (const auto& [value, name] : kVariableNames) {
        if (value == v) return name;
    }
    return "unknown";
}

[[nodiscard]] inline std::string_view to_string(Source s) {
    for (const auto& [value, name] : kSourceNames) {
        if (value == s) return name;
    }
    return "unknown";
}

[[nodiscard]] inline Variable variable_from_string(std::string_view s) {
    for (const auto& [value, name] : kVariableNames) {
        if (name == s) return value;
    }
    throw SpecificationError("unknown variable '" + std::string(s) + "'");
}

[[nodiscard]] inline Source source_from_string(std::string_view s) {
    for (const auto& [value, name] : kSourceNames) {
        if (name == s) return value;
    }
    throw SpecificationError("unknown source '" + std::string(s) + "'");
}

/// Natural unit of each variable as stored in the registry.
[[nodiscard]] inline Unit default_unit(Variable v) {
    switch (v) {
        case Variable::labor_force:
        case Variable::population: return Unit::persons;
        default: return Unit::rate;
    }
}

struct DatasetKey {
    Variable variable;
    Source source;

    [[nodiscard]] std::string to_string() const {
        return std::string(lfmkit::to_string(variable)) + "/" + std::string(lfmkit::to_string(source));
    }

    /// Parses `variable/source`.
    [[nodiscard]] static DatasetKey parse(std::string_view text) {
        const auto slash = text.find('/');
        if (slash == std::string_view::npos) {
            throw SpecificationError("dataset key '" + std::string(text) + "' must look like variable/source");
        }
        return {variable_from_string(trim(text.substr(0, slash))), source_from_string(trim(text.substr(slash + 1)))};
    }

    friend auto operator<=>(const DatasetKey&, const DatasetKey&) = default;
};

/// Directory-backed store of validated series.
///
/// Layout: `<root>/manifest.txt` with lines `variable,source,relative_path`
/// and one `year,value` CSV per dataset.  Reads may run concurrently; writes
/// are serialized and rewrite the manifest atomically.
class DatasetRegistry {
public:
    static constexpr std::string_view kManifestName = "manifest.txt";

    explicit DatasetRegistry(std::filesystem::path root) : root_(std::move(root)) {
        std::filesystem::create_directories(root_);
        if (std::filesystem::exists(manifest_path())) {
            load_manifest();
        }
    }

    DatasetRegistry(const DatasetRegistry&) = delete;
    DatasetRegistry& operator=(const DatasetRegistry&) = delete;

    [[nodiscard]] const std::filesystem::path& root() const noexcept { return root_; }
    [[nodiscard]] std::filesystem::path manifest_path() const { return root_ / kManifestName; }

    /// Validates and persists `series` under `key`.  Returns the findings
    /// (warnings only; error-severity findings abort with ValidationError).
    std::vector<Finding> register_series(const DatasetKey& key, const AnnualSeries& series, bool overwrite = false) {
        auto findings = validate(series);
        if (has_errors(findings)) {
            throw ValidationError("dataset " + key.to_string() + " failed validation: " + to_string(findings.front()));
        }
        std::unique_lock lock(mutex_);
        if (!overwrite && entries_.contains(key)) {
            throw ConflictError("dataset " + key.to_string() + " already registered (use overwrite)");
        }
        const auto relative = file_name(key);
        write_atomically(root_ / relative, to_csv_text(series, true));
        entries_.insert_or_assign(key, Entry{relative, series});
        write_manifest();
        return findings;
    }

    [[nodiscard]] AnnualSeries get(const DatasetKey& key) const {
        std::shared_lock lock(mutex_);
        const auto it = entries_.find(key);
        if (it == entries_.end()) {
            throw LookupError("dataset " + key.to_string() + " is not registered in " + root_.string());
        }
        return it->second.series;
    }

    [[nodiscard]] bool contains(const DatasetKey& key) const {
        std::shared_lock lock(mutex_);
        return entries_.contains(key);
    }

    [[nodiscard]] std::vector<DatasetKey> keys() const {
        std::shared_lock lock(mutex_);
        std::vector<DatasetKey> out;
        out.reserve(entries_.size());
        for (const auto& [key, entry] : entries_) {
            out.push_back(key);
        }
        return out;
    }

private:
    struct Entry {
        std::string relative_path;
        AnnualSeries series;
    };

    [[nodiscard]] static std::string file_name(const DatasetKey& key) {
        return std::string(to_string(key.variable)) + "__" + std::string(to_string(key.source)) + ".csv";
    }

    static void write_atomically(const std::filesystem::path& target, const std::string& content) {
        auto tmp = target;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw Error("cannot write " + tmp.string());
            }
            out << content;
            if (!out) {
                throw Error("write failed for " + tmp.string());
            }
        }
        std::filesystem::rename(tmp, target);
    }

    void write_manifest() const {
        std::ostringstream out;
        out << "# variable,source,relative_path\n";
        for (const auto& [key, entry] : entries_) {
            out << to_string(key.variable) << ',' << to_string(key.source) << ',' << entry.relative_path << '\n';
        }
        write_atomically(manifest_path(), out.str());
    }

    void load_manifest() {
        std::ifstream in(manifest_path());
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            const auto line = trim(raw);
            if (line.empty() || line.front() == '#') {
                continue;
            }
            std::vector<std::string_view> fields;
            std::size_t pos = 0;
            while (true) {
                const auto comma = line.find(',', pos);
                fields.push_back(trim(line.substr(pos, comma - pos)));
                if (comma == std::string_view::npos) break;
                pos = comma + 1;
            }
            if (fields.size() != 3) {
                throw ParseError("manifest entry must be 'variable,source,relative_path'", line_no);
            }
            const DatasetKey key{variable_from_string(fields[0]), source_from_string(fields[1])};
            if (entries_.contains(key)) {
                throw DuplicateError("manifest lists " + key.to_string() + " twice");
            }
            const std::string relative(fields[2]);
            std::ifstream data(root_ / relative);
            if (!data) {
                throw LookupError("manifest entry " + key.to_string() + " points to missing file " + relative);
            }
            const auto doc = detail::parse_csv(data);
            Unit unit = default_unit(key.variable);
            std::string label = key.to_string();
            if (auto it = doc.metadata.find("unit"); it != doc.metadata.end()) unit = unit_from_string(it->second);
            if (auto it = doc.metadata.find("label"); it != doc.metadata.end()) label = it->second;
            entries_.emplace(key, Entry{relative, detail::to_series(doc, unit, label)});
        }
    }

    std::filesystem::path root_;
    std::map<DatasetKey, Entry> entries_;
    mutable std::shared_mutex mutex_;
};

}  // namespace lfmkit
