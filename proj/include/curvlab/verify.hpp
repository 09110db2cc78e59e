#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "curvlab/curvature.hpp"

namespace curvlab {

struct Assertion {
    std::string entry;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerificationReport {
    std::string target;
    std::uint64_t seed = 0;
    int points = 50;
    Tolerances tol;
    std::vector<Assertion> assertions;
    /// Informational lines (hypothesis failures, normalization findings).
    std::vector<std::string> notes;

    bool passed() const;
};

/// (name, one-line description) of every verification target.
const std::vector<std::pair<std::string, std::string>>& verification_targets();

/// Runs one target over the relevant catalog entries. Throws NotFoundError for an unknown target.
VerificationReport verify_target(std::string_view target, std::uint64_t seed = 0, int points = 50,
                                 const Tolerances& tol = {});

nlohmann::ordered_json to_json(const VerificationReport& r);
std::string render_text(const VerificationReport& r);

}  // namespace curvlab
