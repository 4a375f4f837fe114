#pragma once

#include <stdexcept>
#include <string>

namespace reflow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// input matrix fails a membership predicate (not in the ambient algebra, wrong
// component, drifted frame, ...); carries the measured violation
struct MembershipError : Error {
    double residual;
    MembershipError(const std::string& what, double r)
        : Error(what + " (residual " + std::to_string(r) + ")"), residual(r) {}
};

// constant commuting data with an n-dimensional coframe cannot exist because
// the requested dimension exceeds the symmetric-space rank
struct RankObstruction : Error {
    int n, rank;
    RankObstruction(int n_, int rank_)
        : Error("obstructed: n=" + std::to_string(n_) +
                " > rank=" + std::to_string(rank_)),
          n(n_), rank(rank_) {}
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct VerificationError : Error {
    std::string check;  // name of the first failing check
    VerificationError(const std::string& check_, const std::string& what)
        : Error(what), check(check_) {}
};

} // namespace reflow
