#include "perron/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>

#include "perron/serialize.hpp"

namespace perron::cli {

namespace {

struct CommonOptions {
    std::string family;
    std::string phi;
    std::string phi0 = "1";
    std::string side;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string out_path;
    std::string format = "json";
    std::string config_path;
};

std::size_t max_depth_cap() {
    if (const char* env = std::getenv("PERRON_MAX_DEPTH")) {
        char* end = nullptr;
        const unsigned long long cap = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && cap > 0) return static_cast<std::size_t>(cap);
        throw validation_error("PERRON_MAX_DEPTH is not a positive integer");
    }
    return 65536;
}

void check_depth(std::size_t requested, const char* what) {
    const std::size_t cap = max_depth_cap();
    if (requested > cap)
        throw validation_error(std::string(what) + " " + std::to_string(requested) +
                               " exceeds the depth cap " + std::to_string(cap) +
                               " (PERRON_MAX_DEPTH)");
}

PhiProgram resolve_program(const CommonOptions& common) {
    if (!common.family.empty() && !common.phi.empty())
        throw validation_error("provide either --family or --phi, not both");
    if (common.family.empty() && common.phi.empty())
        throw validation_error("a phi program is required: --family <name> or --phi <expr>");
    if (!common.family.empty()) {
        if (common.phi0 != "1")
            throw validation_error("--phi0 applies only to --phi programs");
        return builtin_family(common.family);
    }
    BigInt phi0;
    try {
        phi0 = BigInt(common.phi0);
    } catch (const std::invalid_argument&) {
        throw validation_error("--phi0 must be a positive integer");
    }
    return parse_phi_spec(common.phi, phi0);
}

Side resolve_side(const CommonOptions& common, Side fallback) {
    if (common.side.empty()) return fallback;
    return side_from_string(common.side);
}

Rational parse_x(const std::string& text) {
    try {
        return Rational::parse(text);
    } catch (const validation_error&) {
        throw validation_error("--x expects an exact rational \"num/den\", got \"" + text + "\"");
    }
}

// Merges a flat JSON object of flag values into the argument vector; flags
// already present on the command line win.
std::vector<std::string> apply_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;

    std::ifstream in(path);
    if (!in) throw validation_error("cannot open config file: " + path);
    Json config;
    try {
        in >> config;
    } catch (const std::exception& e) {
        throw validation_error("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!config.is_object()) throw validation_error("config file must hold a JSON object");

    for (const auto& [key, value] : config.items()) {
        const std::string flag = "--" + key;
        bool present = false;
        for (const std::string& arg : args)
            if (arg == flag || arg.rfind(flag + "=", 0) == 0) { present = true; break; }
        if (present) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
        } else if (value.is_string()) {
            args.push_back(flag);
            args.push_back(value.get<std::string>());
        } else {
            args.push_back(flag);
            args.push_back(value.dump());
        }
    }
    return args;
}

void emit(const CommonOptions& common, const std::string& text, std::ostream& out) {
    if (common.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(common.out_path, std::ios::binary);
    if (!file) throw validation_error("cannot open output file: " + common.out_path);
    file << text;
}

void emit_json(const CommonOptions& common, Json payload, std::ostream& out) {
    emit(common, payload.dump(2) + "\n", out);
}

Json envelope(const std::string& command, const CommonOptions& common) {
    Json out;
    out["command"] = command;
    out["seed"] = common.seed;
    return out;
}

void require_json(const CommonOptions& common) {
    if (common.format != "json")
        throw validation_error("this subcommand only emits json");
}

} // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact Perron / alternating-Perron expansion toolbox"};
    app.fallthrough();
    app.require_subcommand(1);

    CommonOptions common;
    app.add_option("--family", common.family, "Built-in family name (see `families`)");
    app.add_option("--phi", common.phi, "Custom phi_n expression, e.g. \"(x(n)-1)*x(n)\"");
    app.add_option("--phi0", common.phi0, "Constant phi_0 for --phi programs (default 1)");
    app.add_option("--side", common.side, "Expansion side: pos|alt");
    app.add_option("--seed", common.seed, "RNG seed (echoed in every output)");
    app.add_option("--threads", common.threads, "Worker threads for sampling commands");
    app.add_option("--out", common.out_path, "Write output to a file instead of stdout");
    app.add_option("--format", common.format, "Output format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--config", common.config_path, "JSON file whose keys mirror the flags");

    // expand
    auto* expand_cmd = app.add_subcommand("expand", "Extract expansion digits of an exact rational");
    std::string expand_x;
    std::size_t expand_depth = 16;
    std::size_t expand_digit_bits = 64;
    std::optional<std::size_t> expand_width_bits;
    expand_cmd->add_option("--x", expand_x, "Input as \"num/den\"")->required();
    expand_cmd->add_option("--depth", expand_depth, "Maximum digits to extract");
    expand_cmd->add_option("--max-digit-bits", expand_digit_bits,
                           "Abort if a digit exceeds 2^bits (default 64)");
    expand_cmd->add_option("--stop-width-bits", expand_width_bits,
                           "Stop once the enclosure width is <= 2^-bits");

    // reconstruct
    auto* reconstruct_cmd =
        app.add_subcommand("reconstruct", "Enclosure and partial sum of a digit prefix");
    std::string reconstruct_digits;
    reconstruct_cmd->add_option("--digits", reconstruct_digits, "Comma-separated digits")->required();

    // cylinder
    auto* cylinder_cmd = app.add_subcommand("cylinder", "Exact cylinder bounds for a base");
    std::string cylinder_base;
    cylinder_cmd->add_option("--base", cylinder_base, "Comma-separated base digits")->required();

    // compare
    auto* compare_cmd = app.add_subcommand("compare", "Digitwise order of two expansions");
    std::string compare_a, compare_b;
    compare_cmd->add_option("--a", compare_a, "First digit sequence")->required();
    compare_cmd->add_option("--b", compare_b, "Second digit sequence")->required();

    // transport
    auto* transport_cmd =
        app.add_subcommand("transport", "Digit-preserving transport between the two sides");
    std::string transport_x, transport_base;
    std::size_t transport_depth = 16;
    transport_cmd->add_option("--x", transport_x, "Point to transport (positive-side input)");
    transport_cmd->add_option("--depth", transport_depth, "Digits to carry across");
    transport_cmd->add_option("--base", transport_base, "Cylinder base to transport instead");

    // measure-cover
    auto* cover_cmd =
        app.add_subcommand("measure-cover", "Exact cover value of a digit-restricted set");
    std::string cover_v;
    std::size_t cover_depth = 1;
    cover_cmd->add_option("--v", cover_v, "Allowed digits, comma-separated")->required();
    cover_cmd->add_option("--depth", cover_depth, "Cover depth d");

    // digit-law
    auto* law_cmd = app.add_subcommand("digit-law", "Monte-Carlo digit law vs the exact marginal");
    std::size_t law_position = 1;
    std::uint64_t law_samples = 10000;
    unsigned law_bits = 64;
    std::string law_max_digit = "16";
    law_cmd->add_option("--position", law_position, "Digit position n (1-based)");
    law_cmd->add_option("--samples", law_samples, "Sample count N");
    law_cmd->add_option("--bits", law_bits, "Random bits per sample (>= 32)");
    law_cmd->add_option("--max-digit", law_max_digit, "Law table truncation");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Asymptotic digit statistics");
    std::string stats_kind = "renyi";
    std::size_t stats_n = 40;
    std::uint64_t stats_samples = 200;
    unsigned stats_bits = 4096;
    bool stats_rows = false;
    std::string stats_x;
    std::size_t stats_depth = 16;
    std::string stats_positions = "1,2,3,4";
    std::string stats_max_digit = "16";
    stats_cmd->add_option("--kind", stats_kind, "renyi|growth|frequency")
        ->check(CLI::IsMember({"renyi", "growth", "frequency"}));
    stats_cmd->add_option("--n", stats_n, "Row depth for renyi");
    stats_cmd->add_option("--samples", stats_samples, "Sample count N");
    stats_cmd->add_option("--bits", stats_bits, "Random bits per sample");
    stats_cmd->add_flag("--rows", stats_rows, "Include per-sample rows in JSON output");
    stats_cmd->add_option("--x", stats_x, "Input for --kind growth");
    stats_cmd->add_option("--depth", stats_depth, "Digits for --kind growth");
    stats_cmd->add_option("--positions", stats_positions, "Positions for --kind frequency");
    stats_cmd->add_option("--max-digit", stats_max_digit, "Tracked digits for --kind frequency");

    // families / parse-phi
    auto* families_cmd = app.add_subcommand("families", "List built-in phi families");
    auto* parse_cmd = app.add_subcommand("parse-phi", "Parse and canonicalize a phi expression");

    std::vector<std::string> args;
    try {
        args = apply_config(raw_args);
    } catch (const validation_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        // CLI11 wants argv in reverse order when parsing a vector.
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        err << app.help();
        return 64;
    }

    try {
        if (*families_cmd) {
            Json payload = envelope("families", common);
            Json list = Json::array();
            for (const std::string& name : builtin_family_names()) {
                const PhiProgram program = builtin_family(name);
                Json item;
                item["name"] = name;
                item["phi0"] = program.phi0().get_str();
                item["phi"] = program.source_text();
                list.push_back(std::move(item));
            }
            payload["families"] = std::move(list);
            require_json(common);
            emit_json(common, std::move(payload), out);
            return 0;
        }

        if (*parse_cmd) {
            if (common.phi.empty()) throw validation_error("parse-phi requires --phi <expr>");
            const PhiProgram program = resolve_program(common);
            Json payload = envelope("parse-phi", common);
            payload["phi0"] = program.phi0().get_str();
            payload["canonical"] = program.source_text();
            payload["constant"] =
                program.constant_rule() ? Json(program.constant_rule()->get_str()) : Json(nullptr);
            require_json(common);
            emit_json(common, std::move(payload), out);
            return 0;
        }

        const PhiProgram program = resolve_program(common);

        if (*expand_cmd) {
            check_depth(expand_depth, "--depth");
            const Side side = resolve_side(common, Side::Alternating);
            const Rational x = parse_x(expand_x);
            ExtractLimits limits;
            limits.max_depth = expand_depth;
            limits.max_digit_bits = expand_digit_bits;
            if (expand_width_bits) limits.target_width = Rational::pow2_inverse(*expand_width_bits);

            Json payload = envelope("expand", common);
            payload["program"] = to_json(program);
            payload["side"] = to_string(side);
            payload["x"] = x.str();
            payload["depth"] = expand_depth;
            if (side == Side::Alternating) {
                const DigitOutcome outcome = extract_pminus(x, program, limits);
                payload.update(to_json(outcome));
                payload["enclosure"] =
                    outcome.seq.size() > 0
                        ? to_json(reconstruct_enclosure(program, Side::Alternating,
                                                        outcome.seq.digits))
                        : Json(nullptr);
            } else {
                const DigitSeq seq = extract_p(x, program, limits);
                payload["digits"] = digits_to_json(seq.digits);
                payload["r_values"] = digits_to_json(seq.r_values);
                payload["status"] = "ongoing";
                payload["boundary"] = nullptr;
                payload["enclosure"] =
                    to_json(reconstruct_enclosure(program, Side::Positive, seq.digits));
            }
            require_json(common);
            emit_json(common, std::move(payload), out);
            return 0;
        }

        if (*reconstruct_cmd) {
            const Side side = resolve_side(common, Side::Alternating);
            const std::vector<BigInt> digits = parse_digit_list(reconstruct_digits);
            const DigitSeq seq = make_digit_seq(program, side, digits);
            Json payload = envelope("reconstruct", common);
            payload["program"] = to_json(program);
            payload["side"] = to_string(side);
            payload["digits"] = digits_to_json(seq.digits);
            payload["partial_sum"] = (side == Side::Alternating
                                          ? partial_sum_pminus(program, seq.digits)
                                          : partial_sum_p(program, seq.digits))
                                         .str();
            payload["enclosure"] = to_json(reconstruct_enclosure(program, side, seq.digits));
            require_json(common);
            emit_json(common, std::move(payload), out);
            return 0;
        }

        if (*cylinder_cmd) {
            const Side side = resolve_side(common, Side::Alternating);
            const std::vector<BigInt> base = parse_digit_list(cylinder_base);
            const CylinderBox box = side == Side::Alternating ? cyl_bounds_pminus(program, base)
                                                              : cyl_bounds_p(program, base);
            Json payload = envelope("cylinder", common);
            payload["program"] = to_json(program);
            payload.update(to_json(box));
            require_json(common);
            emit_json(common, std::move(payload), out);
            return 0;
        }

        if (*compare_cmd) {
            const Side side = resolve_side(common, Side::Alternating);
            const DigitSeq a = make_digit_seq(program, side, parse_digit_list(compare_a));
            const DigitSeq b = make_digit_seq(program, side, parse_digit_list(compare_b));
            const Ordering ordering = compare_digitwise(a, b);
            Json payload = envelope("compare", common);
            payload["program"] = to_json(program);
            payload["side"] = to_string(side);
            payload["a"] = digits_to_json(a.digits);
            payload["b"] = digits_to_json(b.digits);
            payload["ordering"] = to_string(ordering);
            Json diverged = nullptr;
            const std::size_t shared = std::min(a.size(), b.size());
            for (std::size_t k = 0; k < shared; ++k)
                if (a.digits[k] != b.digits[k]) { diverged = k + 1; break; }
            payload["diverged_at"] = diverged;
            require_json(common);
            emit_json(common, std::move(payload), out);
            return 0;
        }

        if (*transport_cmd) {
            Json payload = envelope("transport", common);
            payload["program"] = to_json(program);
            if (!transport_base.empty()) {
                const std::vector<BigInt> base = parse_digit_list(transport_base);
                const auto [positive, alternating] = transport_cylinder(program, base);
                payload["mode"] = "cylinder";
                payload["base"] = digits_to_json(base);
                payload["positive"] = to_json(positive);
                payload["alternating"] = to_json(alternating);
                payload["lengths_equal"] = positive.length == alternating.length;
            } else {
                if (transport_x.empty())
                    throw validation_error("transport needs --x <num/den> or --base <digits>");
                check_depth(transport_depth, "--depth");
                const Rational x = parse_x(transport_x);
                payload["mode"] = "point";
                payload.update(to_json(transport_point(program, x, transport_depth)));
            }
            require_json(common);
            emit_json(common, std::move(payload), out);
            return 0;
        }

        if (*cover_cmd) {
            check_depth(cover_depth, "--depth");
            const Side side = resolve_side(common, Side::Alternating);
            std::vector<BigInt> allowed;
            if (!cover_v.empty() && cover_v != "none") allowed = parse_digit_list(cover_v);
            const CoverMeasure cover = cover_measure_restricted(program, side, allowed, cover_depth);
            Json payload = envelope("measure-cover", common);
            payload["program"] = to_json(program);
            payload.update(to_json(cover));
            require_json(common);
            emit_json(common, std::move(payload), out);
            return 0;
        }

        if (*law_cmd) {
            check_depth(law_position, "--position");
            const Side side = resolve_side(common, Side::Alternating);
            McOptions options;
            options.max_digit = BigInt(law_max_digit);
            options.threads = common.threads;
            const DigitLawReport report =
                mc_digit_law(program, side, law_position, law_samples, law_bits, common.seed, options);
            if (common.format == "csv") {
                emit(common, digit_law_csv(report), out);
                return 0;
            }
            Json payload = envelope("digit-law", common);
            payload["program"] = to_json(program);
            payload.update(to_json(report));
            emit_json(common, std::move(payload), out);
            return 0;
        }

        if (*stats_cmd) {
            RowOptions options;
            options.threads = common.threads;
            if (stats_kind == "renyi") {
                check_depth(stats_n, "--n");
                const Side side = resolve_side(common, Side::Positive);
                const RenyiSummary summary =
                    renyi_profile(program, side, stats_n, stats_samples, stats_bits, common.seed,
                                  options);
                if (common.format == "csv") {
                    emit(common, renyi_rows_csv(summary), out);
                    return 0;
                }
                Json payload = envelope("stats", common);
                payload["kind"] = "renyi";
                payload["program"] = to_json(program);
                payload.update(to_json(summary, stats_rows));
                emit_json(common, std::move(payload), out);
                return 0;
            }
            if (stats_kind == "growth") {
                check_depth(stats_depth, "--depth");
                if (stats_x.empty()) throw validation_error("stats --kind growth requires --x");
                const Side side = resolve_side(common, Side::Alternating);
                const Rational x = parse_x(stats_x);
                ExtractLimits limits;
                limits.max_depth = stats_depth;
                limits.max_digit_bits = std::max<std::size_t>(256, 4 * bit_length(x.den()));
                DigitSeq row;
                Json status = "ongoing";
                if (side == Side::Alternating) {
                    DigitOutcome outcome = extract_pminus(x, program, limits);
                    if (!outcome.ongoing()) status = "boundary";
                    row = std::move(outcome.seq);
                } else {
                    row = extract_p(x, program, limits);
                }
                Json payload = envelope("stats", common);
                payload["kind"] = "growth";
                payload["program"] = to_json(program);
                payload["side"] = to_string(side);
                payload["x"] = x.str();
                payload["status"] = status;
                payload["digits"] = digits_to_json(row.digits);
                Json growth = Json::array();
                for (long double g : growth_exponent(row)) growth.push_back(static_cast<double>(g));
                payload["growth"] = std::move(growth);
                require_json(common);
                emit_json(common, std::move(payload), out);
                return 0;
            }
            // frequency
            const Side side = resolve_side(common, Side::Positive);
            std::vector<std::size_t> positions;
            for (const BigInt& p : parse_digit_list(stats_positions)) {
                if (!p.fits_ulong_p()) throw validation_error("position out of range");
                positions.push_back(mpz_get_ui(p.get_mpz_t()));
            }
            for (std::size_t p : positions) check_depth(p, "--positions entry");
            const FrequencyReport report =
                digit_frequency(program, side, positions, stats_samples, stats_bits, common.seed,
                                BigInt(stats_max_digit), options);
            if (common.format == "csv") {
                emit(common, frequency_csv(report), out);
                return 0;
            }
            Json payload = envelope("stats", common);
            payload["kind"] = "frequency";
            payload["program"] = to_json(program);
            payload.update(to_json(report));
            emit_json(common, std::move(payload), out);
            return 0;
        }

        err << "error: no subcommand selected\n";
        return 64;
    } catch (const domain_error& e) {
        err << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const precision_exhausted_error& e) {
        err << "precision exhausted: " << e.what() << "\n";
        return 4;
    } catch (const depth_error& e) {
        err << "guard exhausted: " << e.what() << "\n";
        return 4;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace perron::cli
