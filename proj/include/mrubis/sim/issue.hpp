#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrubis/comparch/uid.hpp"

namespace mrubis::sim {

using comparch::Uid;

/// Injectable issues: critical failures (CF) and performance issues (PI).
enum class IssueKind { CF1, CF2, CF3, CF4, CF5, PI1, PI2, PI3 };

inline constexpr IssueKind kAllIssueKinds[] = {IssueKind::CF1, IssueKind::CF2, IssueKind::CF3, IssueKind::CF4,
                                               IssueKind::CF5, IssueKind::PI1, IssueKind::PI2, IssueKind::PI3};

std::string_view toString(IssueKind kind);
std::optional<IssueKind> parseIssueKind(std::string_view text);
std::string_view describe(IssueKind kind);

struct Injection {
    IssueKind kind{};
    Uid target;

    friend bool operator==(const Injection&, const Injection&) = default;
};

/// A remaining problem found by a validator. Violations are data, not faults.
struct Violation {
    std::string validator;
    std::string code;
    Uid subject;
    std::string message;
};

}  // namespace mrubis::sim
