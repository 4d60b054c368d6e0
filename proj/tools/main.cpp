// packlim: pack, verify, and take limits of brick packings.
//
// Exit codes: 0 valid / success, 1 invalid (or packer capacity failure),
// 2 divergence, 64 usage error, 65 file parse error.

#include "packlim/io.hpp"
#include "packlim/pack.hpp"
#include "packlim/svg.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int EXIT_INVALID = 1;
constexpr int EXIT_DIVERGENCE = 2;
constexpr int EXIT_USAGE = 64;
constexpr int EXIT_PARSE = 65;

packlim::Rat parse_param(const std::string& s) {
  if (auto q = packlim::parse_exact(s)) return *q;
  if (auto d = packlim::parse_float(s)) return packlim::rat_of_double(*d);
  throw CLI::ValidationError("expected a p/q fraction or decimal, got \"" + s + "\"");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw packlim::CertParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_report(const packlim::VerificationReport& rep) {
  using packlim::Violation;
  for (const Violation& v : rep.violations) {
    switch (v.kind) {
      case Violation::Kind::containment:
        std::cout << "containment " << v.i << " " << packlim::format_float(v.margin) << "\n";
        break;
      case Violation::Kind::overlap:
        std::cout << "overlap " << v.i << " " << v.j << " " << packlim::format_float(v.margin)
                  << "\n";
        break;
      case Violation::Kind::mode:
        std::cout << "mode " << v.i << "\n";
        break;
    }
  }
  std::cout << to_string(rep.verdict);
  if (rep.infinite_volume)
    std::cout << " coverage=n/a";
  else if (rep.coverage_exact)
    std::cout << " coverage=" << packlim::format_exact(*rep.coverage_exact);
  else
    std::cout << " coverage=" << packlim::format_float(rep.coverage);
  if (rep.partial) std::cout << " partial";
  std::cout << "\n";
}

int run(int argc, char** argv) {
  using namespace packlim;

  CLI::App app{"brick packing toolkit: pack Moser collections, verify packing "
               "certificates, extract limit packings from certificate sequences"};
  app.require_subcommand(1);

  // ---- pack
  auto* pack = app.add_subcommand("pack", "pack a Moser collection and write a certificate");
  std::string pack_kind, pack_param, pack_out;
  int pack_n = 0;
  pack->add_option("kind", pack_kind, "moser_rectangles or moser_squares")->required();
  pack->add_option("-n,--count", pack_n, "truncation index N")->required();
  pack->add_option("-p,--param", pack_param, "square side / rectangle width (p/q or decimal)")
      ->required();
  pack->add_option("-o,--out", pack_out, "output certificate path")->required();

  // ---- verify
  auto* verify = app.add_subcommand("verify", "verify a packing certificate");
  std::string verify_path, mode_override;
  verify->add_option("file", verify_path, "certificate path")->required();
  verify->add_option("--mode-override", mode_override,
                     "verify under this mode instead of the certificate's own");

  // ---- limit
  auto* limit = app.add_subcommand("limit", "extract a limit packing from certificates");
  std::vector<std::string> limit_paths;
  std::string limit_out, limit_target_spec;
  double limit_tol = 1e-9;
  int limit_min_keep = 2;
  limit->add_option("files", limit_paths, "certificate paths, in sequence order")
      ->required()
      ->expected(-1);
  limit->add_option("-o,--out", limit_out, "output path for the limit certificate")->required();
  limit->add_option("--tol", limit_tol, "final clustering tolerance");
  limit->add_option("--min-keep", limit_min_keep, "minimum surviving subsequence length");
  limit->add_option("--target", limit_target_spec,
                    "declared limit target as a certificate-style JSON object "
                    "(default: inferred from the entry targets)");

  // ---- render
  auto* render = app.add_subcommand("render", "render a 2-D certificate to SVG");
  std::string render_path, render_out;
  render->add_option("file", render_path, "certificate path")->required();
  render->add_option("-o,--out", render_out, "output SVG path")->required();

  // ---- brick-limit
  auto* bl = app.add_subcommand("brick-limit", "limit-brick estimate from a CSV of dimensions");
  std::string bl_csv;
  int bl_window = 50;
  bl->add_option("csv", bl_csv, "CSV path, one brick dimension row per line")->required();
  bl->add_option("-w,--window", bl_window, "tail window length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : EXIT_USAGE;
  }

  try {
    if (*pack) {
      CollectionKind kind;
      if (pack_kind == "moser_rectangles")
        kind = CollectionKind::moser_rectangles;
      else if (pack_kind == "moser_squares")
        kind = CollectionKind::moser_squares;
      else
        throw CLI::ValidationError("kind must be moser_rectangles or moser_squares");
      Rat param = parse_param(pack_param);
      ExactCertificate cert;
      try {
        cert = kind == CollectionKind::moser_rectangles ? pack_moser_rectangles(pack_n, param)
                                                        : pack_moser_squares(pack_n, param);
      } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INVALID;
      }
      save_certificate(AnyCertificate(cert), pack_out);
      VerificationReport rep = verify_packing(cert);
      std::cout << "coverage=";
      if (rep.coverage_exact)
        std::cout << format_exact(*rep.coverage_exact) << " (" << format_float(rep.coverage)
                  << ")";
      else
        std::cout << format_float(rep.coverage);
      std::cout << "\n";
      return 0;
    }

    if (*verify) {
      AnyCertificate cert = load_certificate(verify_path);
      VerificationReport rep;
      if (!mode_override.empty()) {
        Mode m;
        if (mode_override == "general")
          m = Mode::general;
        else if (mode_override == "oriented")
          m = Mode::oriented;
        else if (mode_override == "translated")
          m = Mode::translated;
        else
          throw CLI::ValidationError("mode must be general, oriented or translated");
        rep = std::visit([&](const auto& c) { return verify_packing_as(c, m); }, cert);
      } else {
        rep = verify_packing(cert);
      }
      print_report(rep);
      return rep.verdict == Verdict::valid ? 0 : EXIT_INVALID;
    }

    if (*limit) {
      std::vector<AnyCertificate> certs;
      for (const auto& p : limit_paths) certs.push_back(load_certificate(p));
      for (size_t i = 1; i < certs.size(); ++i)
        if (certs[i].index() != certs.front().index())
          throw CLI::ValidationError("certificates mix exact and float arithmetic");

      std::optional<Target> declared;
      if (!limit_target_spec.empty()) declared = parse_target_spec(limit_target_spec);

      auto run_limit = [&](auto tag) -> int {
        using S = decltype(tag);
        std::vector<Certificate<S>> entries;
        for (auto& c : certs) entries.push_back(std::get<Certificate<S>>(std::move(c)));
        PackingSequence<S> seq = make_sequence(std::move(entries));
        LimitReport<S> rep;
        try {
          rep = extract_convergent_subsequence(seq, limit_tol, limit_min_keep, declared);
        } catch (const DivergenceError& e) {
          std::cerr << "divergence: " << e.what() << "\n";
          return EXIT_DIVERGENCE;
        }
        save_certificate(AnyCertificate(rep.limit), limit_out);
        write_file(limit_out + ".report.json", serialize_limit_report(rep));
        std::cout << "kept=" << rep.kept_indices.size()
                  << " diameter=" << format_float(rep.cluster_diameter)
                  << " slack=" << format_float(rep.certified_slack)
                  << " verdict=" << to_string(rep.verdict.verdict) << "\n";
        return rep.verdict.verdict == Verdict::valid ? 0 : EXIT_INVALID;
      };
      return is_exact(certs.front()) ? run_limit(Rat()) : run_limit(double());
    }

    if (*render) {
      AnyCertificate cert = load_certificate(render_path);
      write_file(render_out, render_svg(cert));
      return 0;
    }

    if (*bl) {
      auto rows = parse_dims_csv(read_file(bl_csv));
      BrickLimit out = brick_limit(rows, bl_window);
      std::cout << "V=" << format_exact(out.volume) << " (" << format_float(to_double(out.volume))
                << ")\nb=[";
      for (size_t m = 0; m < out.dims.size(); ++m)
        std::cout << (m ? ", " : "") << format_exact(out.dims[m]);
      std::cout << "]\nwindow=" << out.window << "\n";
      Rat prod(1);
      for (const Rat& d : out.dims) prod *= d;
      if (prod > out.volume)
        std::cout << "note: dimension product exceeds V by " << format_float(to_double(prod - out.volume))
                  << "\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return EXIT_USAGE;
  } catch (const packlim::CertParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return EXIT_PARSE;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return EXIT_USAGE;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return EXIT_USAGE;
  }
  return EXIT_USAGE;
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
