#include "perron/serialize.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace perron {

namespace {

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

} // namespace

Json digit_to_json(const BigInt& digit) {
    if (digit.fits_ulong_p() && bit_length(digit) <= 63)
        return static_cast<std::int64_t>(mpz_get_ui(digit.get_mpz_t()));
    return digit.get_str();
}

Json digits_to_json(const std::vector<BigInt>& digits) {
    Json out = Json::array();
    for (const BigInt& d : digits) out.push_back(digit_to_json(d));
    return out;
}

std::vector<BigInt> digits_from_json(const Json& array) {
    std::vector<BigInt> out;
    for (const auto& item : array) {
        if (item.is_number_integer())
            out.emplace_back(static_cast<long>(item.get<std::int64_t>()));
        else
            out.emplace_back(item.get<std::string>());
    }
    return out;
}

Json to_json(const PhiProgram& program) {
    Json out;
    if (program.is_builtin())
        out["family"] = family_name(program.family());
    else
        out["family"] = nullptr;
    out["phi"] = program.source_text();
    out["phi0"] = program.phi0().get_str();
    return out;
}

Json to_json(const Interval& interval) {
    Json out;
    out["lo"] = interval.lo.str();
    out["hi"] = interval.hi.str();
    out["lo_open"] = interval.lo_open;
    out["hi_open"] = interval.hi_open;
    out["width"] = interval.width().str();
    return out;
}

Json to_json(const CylinderBox& box) {
    Json out;
    out["side"] = to_string(box.side);
    out["base"] = digits_to_json(box.base);
    out["rank"] = box.rank;
    out["inf"] = box.span.lo.str();
    out["sup"] = box.span.hi.str();
    out["length"] = box.length.str();
    return out;
}

Json to_json(const BoundaryWitness& witness) {
    Json out;
    out["rank"] = witness.rank;
    out["base"] = digits_to_json(witness.base);
    out["kind"] = witness.kind == BoundaryKind::Sup ? "sup" : "inf";
    out["endpoint"] = witness.endpoint.str();
    return out;
}

Json to_json(const DigitOutcome& outcome) {
    Json out;
    out["digits"] = digits_to_json(outcome.seq.digits);
    out["r_values"] = digits_to_json(outcome.seq.r_values);
    out["status"] = outcome.ongoing() ? "ongoing" : "boundary";
    out["boundary"] = outcome.boundary ? to_json(*outcome.boundary) : Json(nullptr);
    return out;
}

Json to_json(const ValidationReport& report) {
    Json out;
    out["valid"] = report.valid;
    if (report.valid) {
        out["violation_index"] = nullptr;
        out["message"] = nullptr;
    } else {
        out["violation_index"] = report.violation_index;
        out["message"] = report.message;
    }
    out["r_chain"] = digits_to_json(report.r_chain);
    return out;
}

Json to_json(const TransportResult& result) {
    Json out;
    out["x"] = result.input.str();
    out["digits"] = digits_to_json(result.digits);
    out["depth"] = result.depth;
    out["enclosure"] = to_json(result.image_enclosure);
    return out;
}

Json to_json(const CoverMeasure& cover) {
    Json out;
    out["side"] = to_string(cover.side);
    out["v"] = digits_to_json(cover.allowed);
    out["depth"] = cover.depth;
    out["value"] = cover.value.str();
    out["cylinder_count"] = cover.cylinder_count;
    return out;
}

Json to_json(const DigitLawReport& report) {
    Json out;
    out["side"] = to_string(report.side);
    out["position"] = report.position;
    out["samples"] = report.samples;
    out["bits"] = report.bits;
    out["max_digit"] = digit_to_json(report.max_digit);
    Json entries = Json::array();
    for (const DigitLawEntry& entry : report.entries) {
        Json cell;
        cell["digit"] = digit_to_json(entry.digit);
        cell["count"] = entry.count;
        cell["empirical"] = entry.empirical.str();
        cell["exact"] = entry.exact.str();
        cell["deviation"] = entry.deviation;
        cell["sigma4"] = entry.sigma4;
        cell["flagged"] = entry.flagged;
        entries.push_back(std::move(cell));
    }
    out["entries"] = std::move(entries);
    out["other_count"] = report.other_count;
    out["other_empirical"] = report.other_empirical.str();
    out["tail_exact"] = report.tail_exact.str();
    out["max_abs_deviation"] = report.max_abs_deviation;
    out["resamples"] = report.resamples;
    out["transport_checks"] = report.transport_checks;
    return out;
}

Json to_json(const BoundaryInfo& info) {
    Json out;
    out["detected"] = info.detected();
    out["witness"] = info.witness ? to_json(*info.witness) : Json(nullptr);
    out["probed_depth"] = info.probed_depth;
    return out;
}

namespace {

Json to_json(const Quantiles& q) {
    Json out;
    out["min"] = static_cast<double>(q.min);
    out["q25"] = static_cast<double>(q.q25);
    out["median"] = static_cast<double>(q.median);
    out["q75"] = static_cast<double>(q.q75);
    out["max"] = static_cast<double>(q.max);
    return out;
}

} // namespace

Json to_json(const RenyiSummary& summary, bool include_rows) {
    Json out;
    out["side"] = to_string(summary.side);
    out["n"] = summary.depth;
    out["samples"] = summary.samples;
    out["bits"] = summary.bits;
    Json stats;
    stats["mean_score"] = static_cast<double>(summary.mean_score);
    stats["sd_score"] = static_cast<double>(summary.sd_score);
    stats["score_quantiles"] = to_json(summary.score_quantiles);
    stats["mean_growth"] = static_cast<double>(summary.mean_growth);
    stats["lil"] = summary.lil ? to_json(*summary.lil) : Json(nullptr);
    out["summary"] = std::move(stats);
    out["resamples"] = summary.resamples;
    out["max_bits_used"] = summary.max_bits_used;
    if (include_rows) {
        Json rows = Json::array();
        for (const StatRow& row : summary.rows) {
            Json r;
            r["sample"] = row.sample;
            r["seed_offset"] = row.seed_offset;
            r["p_n"] = row.p_n.get_str();
            r["log_p_n"] = static_cast<double>(row.log_p_n);
            r["score"] = static_cast<double>(row.score);
            r["growth"] = static_cast<double>(row.growth);
            r["gap"] = row.gap.get_str();
            rows.push_back(std::move(r));
        }
        out["rows"] = std::move(rows);
    }
    return out;
}

Json to_json(const FrequencyReport& report) {
    Json out;
    out["side"] = to_string(report.side);
    out["positions"] = report.positions;
    out["samples"] = report.samples;
    out["bits"] = report.bits;
    out["max_digit"] = digit_to_json(report.max_digit);
    out["exact_available"] = report.exact_available;
    out["tail_exact"] = report.exact_available ? Json(report.tail_exact.str()) : Json(nullptr);
    Json cells = Json::array();
    for (const FrequencyCell& cell : report.cells) {
        Json c;
        c["position"] = cell.position;
        c["digit"] = digit_to_json(cell.digit);
        c["count"] = cell.count;
        c["empirical"] = cell.empirical.str();
        c["exact"] = cell.exact ? Json(cell.exact->str()) : Json(nullptr);
        c["deviation"] = cell.deviation ? Json(*cell.deviation) : Json(nullptr);
        cells.push_back(std::move(c));
    }
    out["cells"] = std::move(cells);
    out["other_counts"] = report.other_counts;
    out["resamples"] = report.resamples;
    out["max_bits_used"] = report.max_bits_used;
    return out;
}

std::string digit_law_csv(const DigitLawReport& report) {
    std::ostringstream out;
    out << "digit,empirical,exact,deviation\n";
    for (const DigitLawEntry& entry : report.entries)
        out << entry.digit.get_str() << ',' << entry.empirical.str() << ',' << entry.exact.str()
            << ',' << format_double(entry.deviation) << '\n';
    return out.str();
}

std::string renyi_rows_csv(const RenyiSummary& summary) {
    std::ostringstream out;
    out << "sample,seed_offset,n,p_n,log_p_n,score\n";
    for (const StatRow& row : summary.rows)
        out << row.sample << ',' << row.seed_offset << ',' << summary.depth << ','
            << row.p_n.get_str() << ',' << format_double(static_cast<double>(row.log_p_n)) << ','
            << format_double(static_cast<double>(row.score)) << '\n';
    return out.str();
}

std::string frequency_csv(const FrequencyReport& report) {
    std::ostringstream out;
    out << "position,digit,empirical,exact,deviation\n";
    for (const FrequencyCell& cell : report.cells) {
        out << cell.position << ',' << cell.digit.get_str() << ',' << cell.empirical.str() << ',';
        out << (cell.exact ? cell.exact->str() : "");
        out << ',';
        out << (cell.deviation ? format_double(*cell.deviation) : "");
        out << '\n';
    }
    return out.str();
}

std::string format_digit_list(const std::vector<BigInt>& digits) {
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i) out += ',';
        out += digits[i].get_str();
    }
    return out;
}

std::vector<BigInt> parse_digit_list(const std::string& text) {
    std::vector<BigInt> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        const std::string part = text.substr(start, comma - start);
        if (part.empty()) throw validation_error("empty entry in digit list \"" + text + "\"");
        for (char c : part)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw validation_error("bad digit \"" + part + "\" in list");
        out.emplace_back(part);
        start = comma + 1;
        if (comma == text.size()) break;
    }
    if (out.empty()) throw validation_error("empty digit list");
    return out;
}

} // namespace perron
