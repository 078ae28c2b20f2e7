#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vulnwatch {

/// Parse an RFC 3339 timestamp ("2020-02-19T12:30:00Z", offsets and a
/// fractional-second part accepted) to UTC seconds since the Unix epoch.
/// Fractional seconds are truncated. Returns nullopt on any syntax or
/// range violation.
std::optional<std::int64_t> parse_rfc3339(std::string_view s);

/// Format UTC epoch seconds as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339_utc(std::int64_t epoch_seconds);

/// UTC calendar day index (days since epoch, floor division).
std::int64_t utc_day(std::int64_t epoch_seconds);

}  // namespace vulnwatch
