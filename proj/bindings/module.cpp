#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "perron/serialize.hpp"

namespace py = pybind11;

namespace {

using namespace perron;

// Exact values cross into Python as fractions.Fraction; digits as ints.
// Fraction("num/den") parses the canonical string form directly.
py::object py_fraction(const Rational& x) {
    static py::object fraction_type = py::module_::import("fractions").attr("Fraction");
    return fraction_type(py::str(x.str()));
}

py::object py_bigint(const BigInt& z) {
    static py::object int_type = py::module_::import("builtins").attr("int");
    return int_type(py::str(z.get_str()));
}

Rational rational_from_py(const py::object& value) {
    if (py::isinstance<py::int_>(value))
        return Rational(BigInt(py::cast<std::string>(py::str(value))));
    return Rational::parse(py::cast<std::string>(py::str(value)));
}

BigInt bigint_from_py(const py::object& value) {
    return BigInt(py::cast<std::string>(py::str(value)));
}

std::vector<BigInt> digits_from_py(const py::sequence& seq) {
    std::vector<BigInt> out;
    out.reserve(py::len(seq));
    for (const auto& item : seq) out.push_back(bigint_from_py(py::reinterpret_borrow<py::object>(item)));
    return out;
}

py::object json_to_py(const Json& value) {
    switch (value.type()) {
        case Json::value_t::null: return py::none();
        case Json::value_t::boolean: return py::bool_(value.get<bool>());
        case Json::value_t::number_integer: return py::int_(value.get<std::int64_t>());
        case Json::value_t::number_unsigned: return py::int_(value.get<std::uint64_t>());
        case Json::value_t::number_float: return py::float_(value.get<double>());
        case Json::value_t::string: return py::str(value.get<std::string>());
        case Json::value_t::array: {
            py::list out;
            for (const auto& item : value) out.append(json_to_py(item));
            return out;
        }
        case Json::value_t::object: {
            py::dict out;
            for (const auto& [key, item] : value.items()) out[py::str(key)] = json_to_py(item);
            return out;
        }
        default: return py::none();
    }
}

py::list py_digits(const std::vector<BigInt>& digits) {
    py::list out;
    for (const BigInt& d : digits) out.append(py_bigint(d));
    return out;
}

py::tuple py_interval(const Interval& interval) {
    return py::make_tuple(py_fraction(interval.lo), py_fraction(interval.hi), interval.lo_open,
                          interval.hi_open);
}

Side side_from_py(const std::string& side) { return side_from_string(side); }

ExtractLimits limits_from_py(std::size_t max_depth, std::size_t max_digit_bits,
                             const py::object& stop_width_bits) {
    ExtractLimits limits;
    limits.max_depth = max_depth;
    limits.max_digit_bits = max_digit_bits;
    if (!stop_width_bits.is_none())
        limits.target_width = Rational::pow2_inverse(py::cast<unsigned>(stop_width_bits));
    return limits;
}

} // namespace

PYBIND11_MODULE(_perron, m) {
    m.doc() = "Exact Perron / alternating-Perron expansions";

    py::class_<PhiProgram>(m, "PhiProgram")
        .def_property_readonly("phi0", [](const PhiProgram& p) { return py_bigint(p.phi0()); })
        .def_property_readonly("source_text",
                               [](const PhiProgram& p) { return p.source_text(); })
        .def_property_readonly("is_builtin", [](const PhiProgram& p) { return p.is_builtin(); })
        .def("eval", [](const PhiProgram& p, std::size_t n, const py::sequence& prefix) {
            return py_bigint(eval_phi(p, n, digits_from_py(prefix)));
        })
        .def("__eq__", [](const PhiProgram& a, const PhiProgram& b) {
            return structurally_equal(a, b);
        })
        .def("__repr__", [](const PhiProgram& p) {
            return "PhiProgram(phi0=" + p.phi0().get_str() + ", phi=\"" + p.source_text() + "\")";
        });

    m.def("builtin_family", [](const std::string& name) { return builtin_family(name); });
    m.def("parse_phi", [](const std::string& text, const py::object& phi0) {
        return parse_phi_spec(text, bigint_from_py(phi0));
    }, py::arg("text"), py::arg("phi0") = py::int_(1));
    m.def("families", [] { return builtin_family_names(); });

    m.def("extract_pminus",
          [](const py::object& x, const PhiProgram& program, std::size_t max_depth,
             std::size_t max_digit_bits, const py::object& stop_width_bits) {
              const DigitOutcome outcome = extract_pminus(
                  rational_from_py(x), program,
                  limits_from_py(max_depth, max_digit_bits, stop_width_bits));
              py::dict out;
              out["digits"] = py_digits(outcome.seq.digits);
              out["r_values"] = py_digits(outcome.seq.r_values);
              out["status"] = outcome.ongoing() ? "ongoing" : "boundary";
              if (outcome.boundary) {
                  py::dict witness;
                  witness["rank"] = outcome.boundary->rank;
                  witness["base"] = py_digits(outcome.boundary->base);
                  witness["kind"] = outcome.boundary->kind == BoundaryKind::Sup ? "sup" : "inf";
                  witness["endpoint"] = py_fraction(outcome.boundary->endpoint);
                  out["boundary"] = witness;
              } else {
                  out["boundary"] = py::none();
              }
              return out;
          },
          py::arg("x"), py::arg("program"), py::arg("max_depth") = 16,
          py::arg("max_digit_bits") = 64, py::arg("stop_width_bits") = py::none());

    m.def("extract_p",
          [](const py::object& x, const PhiProgram& program, std::size_t max_depth,
             std::size_t max_digit_bits, const py::object& stop_width_bits) {
              return py_digits(extract_p(rational_from_py(x), program,
                                         limits_from_py(max_depth, max_digit_bits, stop_width_bits))
                                   .digits);
          },
          py::arg("x"), py::arg("program"), py::arg("max_depth") = 16,
          py::arg("max_digit_bits") = 64, py::arg("stop_width_bits") = py::none());

    m.def("partial_sum_pminus", [](const PhiProgram& program, const py::sequence& digits) {
        return py_fraction(partial_sum_pminus(program, digits_from_py(digits)));
    });
    m.def("partial_sum_p", [](const PhiProgram& program, const py::sequence& digits) {
        return py_fraction(partial_sum_p(program, digits_from_py(digits)));
    });

    m.def("reconstruct_enclosure",
          [](const PhiProgram& program, const std::string& side, const py::sequence& digits) {
              return py_interval(
                  reconstruct_enclosure(program, side_from_py(side), digits_from_py(digits)));
          });

    m.def("validate_digits",
          [](const PhiProgram& program, const py::sequence& digits, const std::string& side) {
              const ValidationReport report =
                  validate_digits(program, digits_from_py(digits), side_from_py(side));
              py::dict out;
              out["valid"] = report.valid;
              out["violation_index"] =
                  report.valid ? py::object(py::none()) : py::object(py::int_(report.violation_index));
              out["message"] = report.valid ? py::object(py::none()) : py::object(py::str(report.message));
              out["r_chain"] = py_digits(report.r_chain);
              return out;
          },
          py::arg("program"), py::arg("digits"), py::arg("side") = "alt");

    m.def("cyl_bounds", [](const PhiProgram& program, const std::string& side,
                           const py::sequence& base) {
        const CylinderBox box = side_from_py(side) == Side::Alternating
                                    ? cyl_bounds_pminus(program, digits_from_py(base))
                                    : cyl_bounds_p(program, digits_from_py(base));
        py::dict out;
        out["side"] = to_string(box.side);
        out["base"] = py_digits(box.base);
        out["rank"] = box.rank;
        out["inf"] = py_fraction(box.span.lo);
        out["sup"] = py_fraction(box.span.hi);
        out["length"] = py_fraction(box.length);
        return out;
    });

    m.def("child_ratio", [](const PhiProgram& program, const py::sequence& base, const py::object& i) {
        return py_fraction(child_ratio(program, digits_from_py(base), bigint_from_py(i)));
    });

    m.def("adjacent_boundary", [](const PhiProgram& program, const py::sequence& base) {
        return py_fraction(adjacent_boundary(program, digits_from_py(base)));
    });

    m.def("compare_digitwise",
          [](const PhiProgram& program, const std::string& side, const py::sequence& a,
             const py::sequence& b) {
              const Side s = side_from_py(side);
              return to_string(compare_digitwise(make_digit_seq(program, s, digits_from_py(a)),
                                                 make_digit_seq(program, s, digits_from_py(b))));
          });

    m.def("transport_point",
          [](const PhiProgram& program, const py::object& x, std::size_t depth) {
              const TransportResult result = transport_point(program, rational_from_py(x), depth);
              py::dict out;
              out["x"] = py_fraction(result.input);
              out["digits"] = py_digits(result.digits);
              out["depth"] = result.depth;
              out["enclosure"] = py_interval(result.image_enclosure);
              return out;
          },
          py::arg("program"), py::arg("x"), py::arg("depth") = 16);

    m.def("transport_cylinder", [](const PhiProgram& program, const py::sequence& base) {
        const auto [positive, alternating] = transport_cylinder(program, digits_from_py(base));
        return py::make_tuple(py_interval(positive.span), py_interval(alternating.span),
                              py_fraction(positive.length));
    });

    m.def("cover_measure",
          [](const PhiProgram& program, const std::string& side, const py::sequence& allowed,
             std::size_t depth) {
              const CoverMeasure cover = cover_measure_restricted(program, side_from_py(side),
                                                                  digits_from_py(allowed), depth);
              py::dict out;
              out["value"] = py_fraction(cover.value);
              out["cylinder_count"] = cover.cylinder_count;
              out["depth"] = cover.depth;
              return out;
          },
          py::arg("program"), py::arg("side"), py::arg("allowed"), py::arg("depth"));

    m.def("mc_digit_law",
          [](const PhiProgram& program, const std::string& side, std::size_t position,
             std::uint64_t samples, unsigned bits, std::uint64_t seed, const py::object& max_digit,
             unsigned threads) {
              McOptions options;
              options.max_digit = bigint_from_py(max_digit);
              options.threads = threads;
              return json_to_py(to_json(
                  mc_digit_law(program, side_from_py(side), position, samples, bits, seed, options)));
          },
          py::arg("program"), py::arg("side") = "alt", py::arg("position") = 1,
          py::arg("samples") = 1000, py::arg("bits") = 64, py::arg("seed") = 0,
          py::arg("max_digit") = py::int_(16), py::arg("threads") = 1);

    m.def("is_membership",
          [](const PhiProgram& program, const py::object& x, std::size_t probe_depth) {
              return json_to_py(to_json(is_membership(program, rational_from_py(x), probe_depth)));
          },
          py::arg("program"), py::arg("x"), py::arg("probe_depth") = 64);

    m.def("renyi_profile",
          [](const PhiProgram& program, const std::string& side, std::size_t n,
             std::uint64_t samples, unsigned bits, std::uint64_t seed, unsigned threads,
             bool rows) {
              RowOptions options;
              options.threads = threads;
              return json_to_py(to_json(
                  renyi_profile(program, side_from_py(side), n, samples, bits, seed, options), rows));
          },
          py::arg("program"), py::arg("side") = "pos", py::arg("n") = 40,
          py::arg("samples") = 200, py::arg("bits") = 4096, py::arg("seed") = 0,
          py::arg("threads") = 1, py::arg("rows") = false);

    m.def("growth_exponent", [](const PhiProgram& program, const std::string& side,
                                const py::sequence& digits) {
        const DigitSeq row = make_digit_seq(program, side_from_py(side), digits_from_py(digits));
        py::list out;
        for (long double g : growth_exponent(row)) out.append(static_cast<double>(g));
        return out;
    });

    m.def("digit_frequency",
          [](const PhiProgram& program, const std::string& side, const std::vector<std::size_t>& positions,
             std::uint64_t samples, unsigned bits, std::uint64_t seed, const py::object& max_digit,
             unsigned threads) {
              RowOptions options;
              options.threads = threads;
              return json_to_py(to_json(digit_frequency(program, side_from_py(side), positions,
                                                        samples, bits, seed,
                                                        bigint_from_py(max_digit), options)));
          },
          py::arg("program"), py::arg("side") = "pos",
          py::arg("positions") = std::vector<std::size_t>{1, 2, 3, 4}, py::arg("samples") = 1000,
          py::arg("bits") = 64, py::arg("seed") = 0, py::arg("max_digit") = py::int_(16),
          py::arg("threads") = 1);

    // Base registered first: translators run newest-first, so the derived
    // classes must come after to be matched before the base.
    py::register_exception<error>(m, "PerronError");
    py::register_exception<domain_error>(m, "DomainError");
    py::register_exception<precision_exhausted_error>(m, "PrecisionExhausted");
    py::register_exception<depth_error>(m, "DepthError");
    py::register_exception<validation_error>(m, "ValidationError");
}
