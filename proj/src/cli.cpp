#include "cbpd/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cbpd/equivalence.hpp"
#include "cbpd/errors.hpp"
#include "cbpd/frames.hpp"
#include "cbpd/homology.hpp"
#include "cbpd/io.hpp"
#include "cbpd/parallel.hpp"
#include "cbpd/providers.hpp"
#include "cbpd/random.hpp"

namespace cbpd {

namespace {

struct InstanceOptions {
  std::string provider;
  std::optional<std::uint32_t> q;
  std::optional<std::size_t> n;
  std::optional<std::size_t> k;
  std::string bases;
  std::string poset;
  std::string frames;
  std::size_t budget = kDefaultElementBudget;
};

void add_instance_options(CLI::App* app, InstanceOptions& o) {
  app->add_option("--provider", o.provider, "Instance source")
      ->required()
      ->check(CLI::IsMember({"subspace", "matroid-uniform", "matroid-free", "matroid-bases",
                             "symplectic", "files"}));
  app->add_option("--q", o.q, "Prime field order");
  app->add_option("--n", o.n, "Dimension, half-dimension or ground set size");
  app->add_option("--k", o.k, "Rank of a uniform matroid");
  app->add_option("--bases", o.bases, "Matroid bases file");
  app->add_option("--poset", o.poset, "Poset file");
  app->add_option("--frames", o.frames, "Frame file");
  app->add_option("--budget", o.budget, "Element enumeration budget");
}

template <class T>
T need(const std::optional<T>& v, const std::string& name, const std::string& provider) {
  if (!v) throw InputError("--provider " + provider + " requires " + name);
  return *v;
}

Instance load_instance(const InstanceOptions& o) {
  const bool files = o.provider == "files";
  if (files && (o.q || o.n || o.k || !o.bases.empty())) {
    throw InputError("--provider files takes only --poset and --frames");
  }
  if (!files && (!o.poset.empty() || !o.frames.empty())) {
    throw InputError("--poset/--frames require --provider files");
  }
  if (o.provider != "matroid-bases" && !o.bases.empty()) throw InputError("--bases requires --provider matroid-bases");
  if (o.provider != "matroid-uniform" && o.k) throw InputError("--k requires --provider matroid-uniform");
  if (o.provider == "subspace") {
    return subspace_provider(need(o.q, "--q", o.provider), need(o.n, "--n", o.provider), o.budget);
  }
  if (o.provider == "symplectic") {
    return symplectic_provider(need(o.q, "--q", o.provider), need(o.n, "--n", o.provider), o.budget);
  }
  if (o.q) throw InputError("--q applies only to subspace and symplectic providers");
  if (o.provider == "matroid-uniform") {
    return matroid_provider(MatroidSpec::uniform(need(o.n, "--n", o.provider), need(o.k, "--k", o.provider)),
                            true, o.budget);
  }
  if (o.provider == "matroid-free") {
    return matroid_provider(MatroidSpec::free(need(o.n, "--n", o.provider)), true, o.budget);
  }
  if (o.provider == "matroid-bases") {
    if (o.bases.empty()) throw InputError("--provider matroid-bases requires --bases");
    if (o.n) throw InputError("--n does not apply to --provider matroid-bases");
    return matroid_provider(parse_bases(read_file(o.bases)), true, o.budget);
  }
  if (o.poset.empty() || o.frames.empty()) throw InputError("--provider files requires --poset and --frames");
  Instance inst;
  inst.name = "files";
  inst.poset = std::make_shared<const FinitePoset>(parse_poset(read_file(o.poset)));
  inst.family = std::make_shared<const FrameFamily>(inst.poset,
                                                    parse_frames(read_file(o.frames), inst.poset->size()));
  return inst;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::uppercase << std::hex << v;
  return os.str();
}

struct VerifyOptions {
  std::string suite;
  std::optional<std::size_t> sample;
  std::string seed = "0xC0FFEE";
  bool exhaustive = false;
  std::string map = "u";
};

class Verifier {
 public:
  Verifier(const Instance& inst, const VerifyOptions& v, std::ostream& out, std::ostream& err)
      : inst_(inst), fam_(*inst.family), opts_(v), out_(out), err_(err) {
    try {
      std::size_t used = 0;
      seed_ = std::stoull(v.seed, &used, 0);
      if (used != v.seed.size()) throw std::invalid_argument(v.seed);
    } catch (const std::exception&) {
      throw InputError("bad --seed '" + v.seed + "'");
    }
  }

  int run() {
    const std::string& s = opts_.suite;
    if (s == "frames") frames();
    else if (s == "ep") ep();
    else if (s == "heights") heights();
    else if (s == "dims") dims();
    else if (s == "bounds") bounds();
    else if (s == "m-in-pd") m_in_pd();
    else if (s == "u-iff-ep") u_iff_ep();
    else if (s == "equivalence") equivalence(false);
    else if (s == "spherical") equivalence(true);
    else if (s == "iso") iso();
    return failed_ ? kViolation : kOk;
  }

 private:
  void pass(const std::string& line) { out_ << "PASS " << line << '\n'; }
  void fail(const std::string& line) {
    out_ << "FAIL " << line << '\n';
    err_ << inst_.name << ": " << line << '\n';
    failed_ = true;
  }

  const DecompositionPoset& pd() {
    if (!pd_) pd_ = build_PD(fam_);
    return *pd_;
  }

  std::optional<SampleSpec> sample_or_default(std::size_t faces) const {
    if (opts_.exhaustive) return std::nullopt;
    if (opts_.sample) return SampleSpec{*opts_.sample, seed_};
    if (faces <= 64) return std::nullopt;
    return SampleSpec{10'000, seed_};
  }

  std::string describe(const std::optional<SampleSpec>& s) const {
    return s ? "sample " + std::to_string(s->samples) + " seed " + hex(s->seed) : "exhaustive";
  }

  void frames() {
    for (std::size_t i = 0; i < fam_.size(); ++i) {
      const auto verdict = validate_frame(fam_.poset(), fam_.frame(i));
      if (!verdict.valid) return fail("frames " + fam_.frame(i).to_string() + " " + verdict.reason);
    }
    pass("frames count=" + std::to_string(fam_.size()));
  }

  void ep() {
    const auto r = check_EP(fam_, pd(), opts_.sample ? std::optional(SampleSpec{*opts_.sample, seed_}) : std::nullopt);
    if (r.holds) {
      pass("ep pairs=" + std::to_string(r.checked));
    } else {
      fail("ep sigma=" + r.witness->first.to_string() + " sigma'=" + r.witness->second.to_string());
    }
  }

  void heights() {
    const auto r = check_height_additivity(fam_, pd());
    if (r.ok) {
      pass("heights checked=" + std::to_string(r.checked));
    } else {
      fail("heights sigma=" + r.witness->to_string());
    }
  }

  void dims() {
    const auto cb = build_CB(fam_);
    const auto d = build_D(fam_);
    const bool ep = check_EP(fam_, pd()).holds;
    const auto r = dimension_report(fam_, cb, pd(), d, ep);
    out_ << "# dim_CB=" << r.dim_cb << " dim_PD=" << r.dim_pd << " dim_D=" << r.dim_d << " m=" << r.m
         << " ep=" << (ep ? "true" : "false") << '\n';
    auto checks = r.checks;
    for (auto& c : closed_form_checks(inst_, r)) checks.push_back(c);
    for (const auto& c : checks) {
      switch (c.status) {
        case CheckStatus::pass: pass("dims " + c.name); break;
        case CheckStatus::fail: fail("dims " + c.name); break;
        case CheckStatus::not_applicable: out_ << "SKIP dims " << c.name << '\n'; break;
      }
    }
  }

  void bounds() {
    const std::size_t faces = FaceIndex(build_CB(fam_)).total();
    const auto spec = sample_or_default(faces);
    out_ << "# bounds " << describe(spec) << '\n';
    const auto r = verify_composite_bounds(fam_, pd(), spec, opts_.exhaustive ? SIZE_MAX : 64);
    if (r.ok()) {
      pass("bounds alpha=" + std::to_string(r.checked_cb) + " beta=" + std::to_string(r.checked_pd));
      return;
    }
    for (const auto& v : r.violations) {
      std::string chains;
      for (const auto& c : v.chain_of_chains) {
        chains += " [";
        for (std::size_t i = 0; i < c.links.size(); ++i) chains += (i ? "<" : "") + c.links[i].to_string();
        chains += "]";
      }
      fail("bounds inequality=" + std::to_string(v.inequality) + chains + " " + v.detail);
    }
  }

  void m_in_pd() {
    const std::size_t faces = FaceIndex(build_CB(fam_)).total();
    const auto spec = sample_or_default(faces);
    out_ << "# m-in-pd " << describe(spec) << '\n';
    const auto r = check_m_in_pd(fam_, pd(), spec);
    if (r.ok) {
      pass("m-in-pd chains=" + std::to_string(r.checked));
    } else {
      fail("m-in-pd " + r.detail);
    }
  }

  void u_iff_ep() {
    const auto ep = check_EP(fam_, pd());
    if (!ep.holds) {
      // The EP witness pair is itself a chain on which u leaves CB.
      const auto u = map_u(fam_, ChainInPoset{{ep.witness->first, ep.witness->second}});
      if (u.is_face) {
        fail("u-iff-ep EP fails but u is a face on " + u.set.to_string());
      } else {
        pass("u-iff-ep ep=false non-face=" + u.set.to_string());
      }
      return;
    }
    std::optional<SampleSpec> spec;
    if (opts_.sample) spec = SampleSpec{*opts_.sample, seed_};
    else if (!opts_.exhaustive && pd().size() > 200) spec = SampleSpec{10'000, seed_};
    out_ << "# u-iff-ep " << describe(spec) << '\n';
    const auto r = check_u_total(fam_, pd(), spec);
    if (r.ok) {
      pass("u-iff-ep ep=true chains=" + std::to_string(r.checked));
    } else {
      fail("u-iff-ep " + r.detail);
    }
  }

  void equivalence(bool spherical) {
    const auto h_cb = integral_homology(build_CB(fam_));
    const auto h_pd = integral_homology(order_complex(pd().order()));
    out_ << "# CB\n" << format_report(h_cb) << "# PD\n" << format_report(h_pd);
    if (same_homology(h_cb, h_pd)) {
      pass("equivalence");
    } else {
      fail("equivalence homology of CB and PD differ");
    }
    if (!spherical) return;
    const int top = pd().dimension();
    const auto support = h_pd.support();
    if (h_pd.torsion_free() && (support.empty() || (support.size() == 1 && support[0] == top))) {
      pass("spherical degree=" + std::to_string(top));
    } else {
      std::string degrees;
      for (int k : support) degrees += (degrees.empty() ? "" : ",") + std::to_string(k);
      fail("spherical homology in degrees {" + degrees + "} expected only " + std::to_string(top) +
           (h_pd.torsion_free() ? "" : " with torsion"));
    }
    if (inst_.expected_top_rank) {
      const Integer rank = top >= 0 && static_cast<std::size_t>(top) < h_pd.groups.size()
                               ? Integer(h_pd.groups[top].rank)
                               : Integer(0);
      if (rank == *inst_.expected_top_rank) {
        pass("spherical rank=" + rank.str());
      } else {
        fail("spherical rank=" + rank.str() + " expected " + inst_.expected_top_rank->str());
      }
    }
  }

  void iso() {
    const auto which = opts_.map == "m" ? InducedMap::m : InducedMap::u;
    const auto v = induced_homology_iso(fam_, pd(), which);
    for (std::size_t k = 0; k < v.degrees.size(); ++k) {
      const auto& d = v.degrees[k];
      const std::string line = "iso map=" + opts_.map + " degree=" + std::to_string(k) + " domain=" +
                               std::to_string(d.dim_domain) + " codomain=" + std::to_string(d.dim_codomain) +
                               " rank=" + std::to_string(d.rank_map);
      if (d.iso) pass(line);
      else fail(line);
    }
  }

  const Instance& inst_;
  const FrameFamily& fam_;
  const VerifyOptions& opts_;
  std::ostream& out_;
  std::ostream& err_;
  std::uint64_t seed_ = kDefaultSeed;
  std::optional<DecompositionPoset> pd_;
  bool failed_ = false;
};

int build(const InstanceOptions& io, const std::string& emit, const std::string& out_path,
          std::string frames_out, std::ostream& out) {
  const Instance inst = load_instance(io);
  const FrameFamily& fam = *inst.family;
  std::string contents;
  if (emit == "cb") {
    contents = write_facets(build_CB(fam));
  } else if (emit == "pd") {
    contents = write_decomposition_poset(build_PD(fam));
  } else if (emit == "d") {
    contents = write_decomposition_poset(build_D(fam));
  } else if (emit == "pd-complex") {
    contents = write_facets(order_complex(build_PD(fam).order()));
  } else if (emit == "d-complex") {
    contents = write_facets(order_complex(build_D(fam).order()));
  } else {
    contents = write_poset(*inst.poset);
    if (frames_out.empty()) frames_out = out_path + ".frames";
    write_file(frames_out, write_frames(fam.frames()));
  }
  write_file(out_path, contents);
  out << inst.name << ": |S|=" << inst.poset->size() << " frames=" << fam.size() << " wrote " << emit << " to "
      << out_path << '\n';
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Common basis complexes, partial decompositions and their homology", "cbpd"};
  app.require_subcommand(1);
  std::optional<std::size_t> threads;
  app.add_option("--threads", threads, "Worker threads (default: CBPD_THREADS or all cores)");

  InstanceOptions build_io;
  std::string emit;
  std::string out_path;
  std::string frames_out;
  auto* build_cmd = app.add_subcommand("build", "Build an instance and export one of its objects");
  add_instance_options(build_cmd, build_io);
  build_cmd->add_option("--emit", emit, "Object to write")
      ->required()
      ->check(CLI::IsMember({"cb", "pd", "d", "poset", "pd-complex", "d-complex"}));
  build_cmd->add_option("--out", out_path, "Output path")->required();
  build_cmd->add_option("--frames-out", frames_out, "Frame file for --emit poset (default <out>.frames)");

  std::string facets;
  std::optional<std::uint64_t> mod;
  std::string report_path;
  auto* hom_cmd = app.add_subcommand("homology", "Reduced homology of a facet file");
  hom_cmd->add_option("--facets", facets, "Facet file")->required();
  hom_cmd->add_option("--mod", mod, "Prime modulus for Betti numbers");
  hom_cmd->add_option("--out", report_path, "Also write the report here");

  InstanceOptions verify_io;
  VerifyOptions vopts;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite on an instance");
  verify_cmd->add_option("suite", vopts.suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"frames", "ep", "heights", "dims", "bounds", "m-in-pd", "u-iff-ep", "equivalence",
                             "spherical", "iso"}));
  add_instance_options(verify_cmd, verify_io);
  verify_cmd->add_option("--sample", vopts.sample, "Number of random samples");
  verify_cmd->add_option("--seed", vopts.seed, "Sampling seed");
  verify_cmd->add_flag("--exhaustive", vopts.exhaustive, "Force exhaustive enumeration");
  verify_cmd->add_option("--map", vopts.map, "Map for the iso suite")->check(CLI::IsMember({"m", "u"}));

  std::optional<std::uint32_t> rank_q;
  std::optional<std::size_t> rank_n;
  auto* rank_cmd = app.add_subcommand("expected-rank", "Rank of the top homology of CB over GF(q)^n");
  rank_cmd->add_option("--q", rank_q, "Prime field order")->required();
  rank_cmd->add_option("--n", rank_n, "Dimension")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (threads) set_thread_count(*threads);
    if (build_cmd->parsed()) return build(build_io, emit, out_path, frames_out, out);
    if (hom_cmd->parsed()) {
      const auto complex = parse_facets(read_file(facets));
      std::string report;
      if (mod) {
        const auto betti = betti_mod_p(complex, *mod);
        if (complex.empty()) report = "H~-1 rank=1\n";
        for (std::size_t k = 0; k < betti.size(); ++k) {
          report += "H~" + std::to_string(k) + " rank=" + std::to_string(betti[k]) + "\n";
        }
      } else {
        report = format_report(integral_homology(complex));
      }
      out << report;
      if (!report_path.empty()) write_file(report_path, report);
      return kOk;
    }
    if (verify_cmd->parsed()) {
      Instance inst;
      try {
        inst = load_instance(verify_io);
      } catch (const InvalidFrameError& e) {
        if (vopts.suite != "frames") throw;
        out << "FAIL frames " << e.what() << '\n';
        err << e.what() << '\n';
        return kViolation;
      }
      return Verifier(inst, vopts, out, err).run();
    }
    out << expected_top_rank(*rank_q, *rank_n) << '\n';
    return kOk;
  } catch (const ResourceError& e) {
    err << "resource budget exceeded: " << e.what() << '\n';
    return kResource;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace cbpd
