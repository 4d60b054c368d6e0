#include "packlim/io.hpp"
#include "packlim/limit.hpp"
#include "packlim/pack.hpp"
#include "packlim/svg.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace packlim;

namespace {

CollectionKind kind_of(const std::string& s) {
  if (s == "moser_rectangles") return CollectionKind::moser_rectangles;
  if (s == "moser_squares") return CollectionKind::moser_squares;
  if (s == "custom") return CollectionKind::custom;
  throw py::value_error("unknown collection kind: " + s);
}

Rat rat_of_str(const std::string& s) {
  if (auto q = parse_exact(s)) return *q;
  if (auto d = parse_float(s)) return rat_of_double(*d);
  throw py::value_error("expected p/q or decimal, got: " + s);
}

struct PyCertificate {
  AnyCertificate cert;
};

py::dict report_to_dict(const VerificationReport& rep) {
  py::dict d;
  d["verdict"] = to_string(rep.verdict);
  py::list viols;
  for (const auto& v : rep.violations) {
    py::dict vd;
    switch (v.kind) {
      case Violation::Kind::containment: vd["kind"] = "containment"; break;
      case Violation::Kind::overlap: vd["kind"] = "overlap"; break;
      case Violation::Kind::mode: vd["kind"] = "mode"; break;
    }
    vd["piece"] = v.i;
    if (v.kind == Violation::Kind::overlap) vd["other"] = v.j;
    vd["margin"] = v.margin;
    viols.append(vd);
  }
  d["violations"] = viols;
  d["coverage"] = rep.coverage;
  d["coverage_exact"] =
      rep.coverage_exact ? py::object(py::str(format_exact(*rep.coverage_exact))) : py::none();
  d["slack_used"] = rep.slack_used;
  d["partial"] = rep.partial;
  d["infinite_volume"] = rep.infinite_volume;
  return d;
}

template <class S>
py::dict limit_to_dict(const LimitReport<S>& rep) {
  py::dict d;
  d["kept_indices"] = rep.kept_indices;
  d["cluster_diameter"] = rep.cluster_diameter;
  d["certified_slack"] = rep.certified_slack;
  d["xi_in_bound"] = rep.xi_in_bound;
  d["verdict"] = report_to_dict(rep.verdict);
  d["limit"] = PyCertificate{AnyCertificate(rep.limit)};
  return d;
}

} // namespace

PYBIND11_MODULE(_packlim, m) {
  m.doc() = "brick packing toolkit: exact packing certificates, certified "
            "verification, and limits of certificate sequences";

  py::register_exception<CertParseError>(m, "CertParseError");
  py::register_exception<DivergenceError>(m, "DivergenceError");
  py::register_exception<CapacityError>(m, "CapacityError");

  py::class_<PyCertificate>(m, "Certificate")
      .def_static("from_json",
                  [](const std::string& text) { return PyCertificate{parse_certificate(text)}; })
      .def_static("load", [](const std::string& path) { return PyCertificate{load_certificate(path)}; })
      .def("to_json", [](const PyCertificate& c) { return serialize_certificate(c.cert); })
      .def("save", [](const PyCertificate& c, const std::string& path) { save_certificate(c.cert, path); })
      .def("verify", [](const PyCertificate& c) { return report_to_dict(verify_packing(c.cert)); })
      .def("render_svg", [](const PyCertificate& c) { return render_svg(c.cert); })
      .def_property_readonly("dim",
                             [](const PyCertificate& c) {
                               return std::visit([](const auto& x) { return x.dim; }, c.cert);
                             })
      .def_property_readonly("mode",
                             [](const PyCertificate& c) {
                               return std::visit([](const auto& x) { return to_string(x.mode); },
                                                 c.cert);
                             })
      .def_property_readonly("arithmetic",
                             [](const PyCertificate& c) {
                               return is_exact(c.cert) ? "exact" : "float";
                             })
      .def_property_readonly("piece_count", [](const PyCertificate& c) {
        return std::visit([](const auto& x) { return x.collection.pieces.size(); }, c.cert);
      });

  m.def("moser_piece", [](const std::string& kind, int i) {
    Piece p = moser_piece(kind_of(kind), i);
    py::list dims;
    for (const Rat& d : p.dims) dims.append(format_exact(d));
    return dims;
  });

  m.def("collection_area", [](const std::string& kind, long long n) {
    return format_exact(collection_area(kind_of(kind), n));
  });
  m.def("collection_area_float", [](const std::string& kind, long long n) {
    return to_double(collection_area(kind_of(kind), n));
  });

  m.def(
      "pack_moser_rectangles",
      [](int n, const std::string& side) {
        return PyCertificate{AnyCertificate(pack_moser_rectangles(n, rat_of_str(side)))};
      },
      py::arg("n"), py::arg("side"));
  m.def(
      "pack_moser_squares",
      [](int n, const std::string& width) {
        return PyCertificate{AnyCertificate(pack_moser_squares(n, rat_of_str(width)))};
      },
      py::arg("n"), py::arg("width"));

  m.def(
      "shrink_search",
      [](const std::string& kind, int n, const std::string& lo, const std::string& hi, int steps) {
        ShrinkResult r = shrink_search(kind_of(kind), n, rat_of_str(lo), rat_of_str(hi), steps);
        py::dict d;
        d["param"] = format_exact(r.param);
        d["param_float"] = to_double(r.param);
        d["steps"] = r.steps;
        d["epsilon"] = r.epsilon;
        return d;
      },
      py::arg("kind"), py::arg("n"), py::arg("lo"), py::arg("hi"), py::arg("steps") = 20);

  m.def(
      "extract_limit",
      [](const std::vector<PyCertificate>& certs, double tol, int min_keep,
         const std::string& target_json) {
        if (certs.empty()) throw py::value_error("no certificates");
        std::optional<Target> declared;
        if (!target_json.empty()) declared = parse_target_spec(target_json);
        bool exact = is_exact(certs.front().cert);
        for (const auto& c : certs)
          if (is_exact(c.cert) != exact)
            throw py::value_error("certificates mix exact and float arithmetic");
        if (exact) {
          std::vector<ExactCertificate> entries;
          for (const auto& c : certs) entries.push_back(std::get<ExactCertificate>(c.cert));
          auto rep = extract_convergent_subsequence(make_sequence(std::move(entries)), tol,
                                                    min_keep, declared);
          return limit_to_dict(rep);
        }
        std::vector<FloatCertificate> entries;
        for (const auto& c : certs) entries.push_back(std::get<FloatCertificate>(c.cert));
        auto rep = extract_convergent_subsequence(make_sequence(std::move(entries)), tol, min_keep,
                                                  declared);
        return limit_to_dict(rep);
      },
      py::arg("certificates"), py::arg("tol") = 1e-9, py::arg("min_keep") = 2,
      py::arg("target_json") = std::string());

  m.def(
      "brick_limit",
      [](const std::vector<std::vector<std::string>>& rows, int window) {
        std::vector<std::vector<Rat>> dims;
        for (const auto& row : rows) {
          std::vector<Rat> r;
          for (const auto& s : row) r.push_back(rat_of_str(s));
          dims.push_back(std::move(r));
        }
        BrickLimit bl = brick_limit(dims, window);
        py::dict d;
        d["volume"] = format_exact(bl.volume);
        d["volume_float"] = to_double(bl.volume);
        py::list b;
        for (const Rat& x : bl.dims) b.append(format_exact(x));
        d["dims"] = b;
        py::list bf;
        for (const Rat& x : bl.dims) bf.append(to_double(x));
        d["dims_float"] = bf;
        d["window"] = bl.window;
        return d;
      },
      py::arg("rows"), py::arg("window") = 50);

  m.def("lipschitz_constant", &lipschitz_constant, py::arg("y_norm"), py::arg("n"));
  m.def("delta_for_point", &delta_for_point, py::arg("epsilon"), py::arg("y_norm"), py::arg("n"));
  m.def("case1_dim_bound", &case1_dim_bound, py::arg("eta"), py::arg("vol_b1"), py::arg("n"));
  m.def("clip_brick", &clip_brick, py::arg("dims"), py::arg("diam_b1"));

  m.def(
      "exclusion_index",
      [](const std::string& target_json, const std::vector<double>& x) {
        Target t = parse_target_spec(target_json);
        auto e = homothet_exclusion_index(t, x);
        return py::make_tuple(e.k, e.epsilon);
      },
      py::arg("target_json"), py::arg("point"));

  m.attr("__version__") = "0.1.0";
}
