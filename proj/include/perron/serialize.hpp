#ifndef PERRON_SERIALIZE_HPP
#define PERRON_SERIALIZE_HPP

#include <json.hpp>

#include <string>
#include <vector>

#include "perron/cylinder.hpp"
#include "perron/expansion.hpp"
#include "perron/stats.hpp"
#include "perron/transport.hpp"

namespace perron {

/// All wire output uses insertion-ordered JSON so a fixed configuration
/// prints byte-identically.
using Json = nlohmann::ordered_json;

/// Digits serialize as JSON numbers while they fit in 64 bits and as
/// decimal strings beyond that.
Json digit_to_json(const BigInt& digit);
Json digits_to_json(const std::vector<BigInt>& digits);
std::vector<BigInt> digits_from_json(const Json& array);

/// Rationals serialize as "num/den" strings.
inline Json to_json(const Rational& x) { return x.str(); }

Json to_json(const PhiProgram& program);
Json to_json(const Interval& interval);
Json to_json(const CylinderBox& box);
Json to_json(const BoundaryWitness& witness);
Json to_json(const DigitOutcome& outcome);
Json to_json(const ValidationReport& report);
Json to_json(const TransportResult& result);
Json to_json(const CoverMeasure& cover);
Json to_json(const DigitLawReport& report);
Json to_json(const BoundaryInfo& info);
Json to_json(const RenyiSummary& summary, bool include_rows);
Json to_json(const FrequencyReport& report);

/// CSV table bodies (header line included) for the formats that have one.
std::string digit_law_csv(const DigitLawReport& report);
std::string renyi_rows_csv(const RenyiSummary& summary);
std::string frequency_csv(const FrequencyReport& report);

/// Comma-separated digit list ("3,2,2,3"); inverse of parse_digit_list.
std::string format_digit_list(const std::vector<BigInt>& digits);
std::vector<BigInt> parse_digit_list(const std::string& text);

} // namespace perron

#endif
