#pragma once

#include <string>
#include <vector>

namespace shortcalc {

/// One named assertion inside a verification report.
struct Check {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    std::string note;
};

struct Report {
    std::string title;
    std::vector<Check> checks;

    void add(std::string name, bool pass, double residual = 0.0, std::string note = {}) {
        checks.push_back({std::move(name), pass, residual, std::move(note)});
    }

    /// Appends every check of `other`, prefixing names with `prefix.`.
    void merge(const Report& other, const std::string& prefix) {
        for (const auto& c : other.checks) checks.push_back({prefix + "." + c.name, c.pass, c.residual, c.note});
    }

    [[nodiscard]] bool passed() const {
        for (const auto& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }

    [[nodiscard]] const Check* find(const std::string& name) const {
        for (const auto& c : checks) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }
};

}  // namespace shortcalc
