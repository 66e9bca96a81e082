// msk: construction and verification CLI for systems of measures on finite
// spaces. One self-contained document per invocation; exit codes are the
// machine contract: 0 all checks pass, 1 a checked property is violated
// (witness printed), 2 input/format error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "msk/msk.hpp"

namespace {

using namespace msk;

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInputError = 2;

std::uint64_t env_seed() {
  const char* s = std::getenv("MSK_SEED");
  if (!s) return 0;
  try {
    return std::stoull(s);
  } catch (...) {
    throw InputError("MSK_SEED must be a nonnegative integer");
  }
}

Document load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

void store(const Document& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file '" + path + "'");
  out << serialize_document(doc);
}

void add_space(Document& doc, const FiniteSpace& s) {
  auto it = doc.spaces.find(s.id());
  if (it != doc.spaces.end()) {
    if (!(it->second == s))
      throw InputError("space name '" + s.id() + "' already in use for a different space");
    return; // identical derived space already present
  }
  doc.spaces.emplace(s.id(), s);
  std::cout << "ADDED space " << s.id() << "\n";
}

void add_map(Document& doc, const std::string& name, const SpaceMap& m) {
  if (doc.maps.find(name) != doc.maps.end())
    throw InputError("map name '" + name + "' already in use");
  doc.maps.emplace(name, m);
  std::cout << "ADDED map " << name << "\n";
}

void add_kernel(Document& doc, const std::string& name, const std::string& map_name,
                Kernel k) {
  if (doc.kernels.find(name) != doc.kernels.end())
    throw InputError("kernel name '" + name + "' already in use");
  doc.kernels.emplace(name, NamedKernel{map_name, std::move(k)});
  std::cout << "ADDED kernel " << name << "\n";
}

std::string rendered(const std::vector<std::string>& labels) {
  std::string out = "{";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ",";
    out += labels[i];
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// check implementations: print "CHECK <prop> <args>: PASS|FAIL" plus WITNESS
// lines, and return the exit code.

struct CheckResult {
  bool pass = true;
  std::vector<std::string> witnesses;
};

void emit(const std::string& header, const CheckResult& r, int& worst) {
  std::cout << "CHECK " << header << (r.pass ? ": PASS" : ": FAIL") << "\n";
  for (const auto& w : r.witnesses) std::cout << "WITNESS " << w << "\n";
  if (!r.pass) worst = kExitViolation;
}

CheckResult check_concentration(const NamedKernel& nk) {
  // Re-runs the construction-time validation; documents that fail it never
  // load, so this audit passes on any loadable document.
  CheckResult r;
  try {
    Kernel revalidated(nk.kernel.base_map(), nk.kernel.fibers());
  } catch (const ConcentrationError& e) {
    r.pass = false;
    r.witnesses.push_back(e.what());
  }
  return r;
}

CheckResult check_positivity(const NamedKernel& nk) {
  CheckResult r;
  const Kernel& k = nk.kernel;
  if (is_positive_on_open_sets(k)) return r;
  r.pass = false;
  for (std::size_t y = 0; y < k.codomain().size(); ++y) {
    Mask fiber = k.base_map().preimage_mask(Mask{1} << y);
    Mask supp = k.at(static_cast<int>(y)).support_mask();
    if (supp != fiber) {
      Mask diff = supp ^ fiber;
      r.witnesses.push_back("fiber of '" + k.codomain().label(static_cast<int>(y)) +
                            "' and support differ at " +
                            k.domain().subset_str(diff));
      break;
    }
  }
  return r;
}

CheckResult check_square_cmd(const Kernel& alpha, const Kernel& beta) {
  CheckResult r;
  SquareReport rep = msk::check_square(alpha, beta);
  if (rep.commutes) return r;
  r.pass = false;
  r.witnesses.push_back("compositions differ over '" + rep.witness->z + "' at '" +
                        rep.witness->point + "': " + rep.witness->via_right.str() +
                        " != " + rep.witness->via_left.str());
  return r;
}

CheckResult check_left_invariance(const FiniteGroupoid& g, const Measure& weights,
                                  std::uint64_t seed) {
  CheckResult r;
  Kernel lambda = range_system(g, weights);
  InvarianceReport rep = is_left_invariant_sets(g, lambda, 12, seed);
  if (rep.ok) return r;
  r.pass = false;
  r.witnesses.push_back("arrow '" + rep.witness->arrow + "' subset " +
                        rendered(rep.witness->subset) + ": " + rep.witness->lhs.str() +
                        " != " + rep.witness->rhs.str());
  return r;
}

CheckResult check_haar(const FiniteGroupoid& g, const Measure& weights, std::uint64_t seed) {
  CheckResult inv = check_left_invariance(g, weights, seed);
  Kernel lambda = range_system(g, weights);
  CheckResult pos = check_positivity(NamedKernel{"", lambda});
  CheckResult r;
  r.pass = inv.pass && pos.pass;
  r.witnesses = inv.witnesses;
  r.witnesses.insert(r.witnesses.end(), pos.witnesses.begin(), pos.witnesses.end());
  return r;
}

CheckResult check_pi_lambda(const SetFamily& p, const SetFamily& d) {
  // Precondition failures are reported as FAIL with a witness, so the check
  // can audit adversarial documents; the library-level verify_pi_lambda
  // treats them as input errors instead.
  CheckResult r;
  if (p.ground() != d.ground()) {
    r.pass = false;
    r.witnesses.push_back("families live on different ground spaces");
    return r;
  }
  const FiniteSpace& ground = p.ground();
  if (p.empty()) {
    r.pass = false;
    r.witnesses.push_back("pi-system candidate is empty");
    return r;
  }
  for (Mask a : p.members())
    for (Mask b : p.members())
      if (!p.contains(a & b)) {
        r.pass = false;
        r.witnesses.push_back("not a pi-system: " + ground.subset_str(a) + " ∩ " +
                              ground.subset_str(b) + " = " + ground.subset_str(a & b) +
                              " is missing");
        return r;
      }
  if (!d.contains(ground.full_mask())) {
    r.pass = false;
    r.witnesses.push_back("not a Dynkin system: ground set missing");
    return r;
  }
  for (Mask a : d.members())
    for (Mask b : d.members())
      if ((a & ~b) == 0 && !d.contains(b & ~a)) {
        r.pass = false;
        r.witnesses.push_back("not a Dynkin system: " + ground.subset_str(b) + " \\ " +
                              ground.subset_str(a) + " = " + ground.subset_str(b & ~a) +
                              " is missing");
        return r;
      }
  for (Mask a : p.members())
    if (!d.contains(a)) {
      r.pass = false;
      r.witnesses.push_back("pi-system member " + ground.subset_str(a) +
                            " is not in the Dynkin system");
      return r;
    }
  SetFamily sigma = generated_sigma(p);
  for (Mask s : sigma.members())
    if (!d.contains(s)) {
      r.pass = false;
      r.witnesses.push_back("generated sigma-algebra member " + ground.subset_str(s) +
                            " escapes the Dynkin system");
      return r;
    }
  return r;
}

CheckResult check_disintegration(const MeasuredMap& mm, const Kernel& k) {
  CheckResult r;
  if (k.base_map() != mm.f)
    throw InputError("disintegration check: kernel is not based on the given map");
  Measure rebuilt = integrate_measure(k, mm.nu);
  if (rebuilt == mm.mu) return r;
  r.pass = false;
  for (std::size_t x = 0; x < mm.mu.space().size(); ++x)
    if (rebuilt.mass(static_cast<int>(x)) != mm.mu.mass(static_cast<int>(x))) {
      r.witnesses.push_back("reconstruction fails at '" +
                            mm.mu.space().label(static_cast<int>(x)) + "': mu gives " +
                            mm.mu.mass(static_cast<int>(x)).str() + ", integral gives " +
                            rebuilt.mass(static_cast<int>(x)).str());
      break;
    }
  return r;
}

CheckResult check_interchange_cmd(const Document& doc, const std::string& gamma1,
                                  const std::string& xi1, const std::string& gamma2,
                                  const std::string& xi2, const std::string& p1,
                                  const std::string& q1, const std::string& p2,
                                  const std::string& q2, const std::string& p3,
                                  const std::string& q3) {
  Pullback lower(doc.map_named(p1), doc.map_named(q1));
  Pullback middle(doc.map_named(p2), doc.map_named(q2));
  Pullback upper(doc.map_named(p3), doc.map_named(q3));
  const Kernel& g1 = doc.kernel(gamma1).kernel;
  const Kernel& x1 = doc.kernel(xi1).kernel;
  const Kernel& g2 = doc.kernel(gamma2).kernel;
  const Kernel& x2 = doc.kernel(xi2).kernel;
  FibredSquare stage1(g1.base_map(), x1.base_map(), lower, middle);
  FibredSquare stage2(g2.base_map(), x2.base_map(), middle, upper);
  InterchangeReport rep = check_interchange(g1, x1, stage1, g2, x2, stage2);
  CheckResult r;
  if (rep.ok) return r;
  r.pass = false;
  r.witnesses.push_back("sides differ over '" + rep.witness->top_point + "' at '" +
                        rep.witness->point + "': " + rep.witness->composed_of_products.str() +
                        " != " + rep.witness->product_of_composites.str());
  return r;
}

// ---------------------------------------------------------------------------

int run_report(const Document& doc, std::uint64_t seed) {
  std::cout << "REPORT format_version=" << doc.format_version << "\n";
  int worst = kExitPass;
  int checks = 0, failed = 0;
  auto tally = [&](const std::string& header, const CheckResult& r) {
    ++checks;
    if (!r.pass) ++failed;
    emit(header, r, worst);
  };

  for (const auto& [name, nk] : doc.kernels) {
    tally("concentration kernel=" + name, check_concentration(nk));
    tally("positivity kernel=" + name, check_positivity(nk));
  }
  for (auto a = doc.kernels.begin(); a != doc.kernels.end(); ++a)
    for (auto b = a; b != doc.kernels.end(); ++b) {
      const Kernel& ka = a->second.kernel;
      const Kernel& kb = b->second.kernel;
      if (ka.base_map().codomain() != kb.base_map().codomain()) continue;
      tally("square-commutes alpha=" + a->first + " beta=" + b->first,
            check_square_cmd(ka, kb));
    }
  for (const auto& [gname, g] : doc.groupoids)
    for (const auto& [mname, m] : doc.measures) {
      if (!(m.space() == g.arrows())) continue;
      tally("left-invariance groupoid=" + gname + " weights=" + mname,
            check_left_invariance(g, m, seed));
      tally("haar groupoid=" + gname + " weights=" + mname, check_haar(g, m, seed));
    }
  for (const auto& [pname, p] : doc.families)
    for (const auto& [dname, d] : doc.families) {
      if (p.ground() != d.ground() || p.empty()) continue;
      bool applicable = true;
      try {
        applicable = is_pi_system(p) && is_dynkin(d) && p.subset_of(d);
      } catch (const Error&) {
        applicable = false;
      }
      if (!applicable) continue;
      tally("pi-lambda pi=" + pname + " dynkin=" + dname, check_pi_lambda(p, d));
    }

  std::cout << "SUMMARY checks=" << checks << " passed=" << (checks - failed)
            << " failed=" << failed << "\n";
  return worst;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact systems-of-measures toolkit on finite spaces"};
  app.require_subcommand(1);

  std::string input, output, name;
  // Shared option storage; each subcommand binds what it needs.
  std::string alpha, beta, kernel_name, along, side = "right";
  std::string map_name, mu_name, nu_name, groupoid_name, weights_name;
  std::string pi_name, dynkin_name;
  std::string gamma1, xi1, gamma2, xi2, p1, q1, p2, q2, p3, q3;

  auto with_input = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "document file")->required();
  };
  auto with_output = [&](CLI::App* cmd) {
    cmd->add_option("--output", output, "output file (default: rewrite input)");
  };

  CLI::App* compose_cmd = app.add_subcommand("compose", "compose two kernels (beta after alpha)");
  with_input(compose_cmd);
  with_output(compose_cmd);
  compose_cmd->add_option("--alpha", alpha)->required();
  compose_cmd->add_option("--beta", beta)->required();
  compose_cmd->add_option("--name", name)->required();

  CLI::App* lift_cmd = app.add_subcommand("lift", "lift a kernel along the opposite leg of a pullback");
  with_input(lift_cmd);
  with_output(lift_cmd);
  lift_cmd->add_option("--kernel", kernel_name)->required();
  lift_cmd->add_option("--along", along)->required();
  lift_cmd->add_option("--side", side, "which projection carries the lift: right (default) or left");
  lift_cmd->add_option("--name", name)->required();

  CLI::App* fibre_cmd = app.add_subcommand("fibre-product", "fibred product of two kernels over a base");
  with_input(fibre_cmd);
  with_output(fibre_cmd);
  fibre_cmd->add_option("--gx", alpha)->required();
  fibre_cmd->add_option("--gy", beta)->required();
  fibre_cmd->add_option("--p1", p1)->required();
  fibre_cmd->add_option("--q1", q1)->required();
  fibre_cmd->add_option("--p2", p2)->required();
  fibre_cmd->add_option("--q2", q2)->required();
  fibre_cmd->add_option("--name", name)->required();

  CLI::App* disintegrate_cmd = app.add_subcommand("disintegrate", "disintegrate mu with respect to nu along a map");
  with_input(disintegrate_cmd);
  with_output(disintegrate_cmd);
  disintegrate_cmd->add_option("--map", map_name)->required();
  disintegrate_cmd->add_option("--mu", mu_name)->required();
  disintegrate_cmd->add_option("--nu", nu_name)->required();
  disintegrate_cmd->add_option("--name", name)->required();

  CLI::App* check_cmd = app.add_subcommand("check", "run one named predicate and print PASS/FAIL");
  check_cmd->require_subcommand(1);

  CLI::App* c_conc = check_cmd->add_subcommand("concentration");
  with_input(c_conc);
  c_conc->add_option("--kernel", kernel_name)->required();

  CLI::App* c_pos = check_cmd->add_subcommand("positivity");
  with_input(c_pos);
  c_pos->add_option("--kernel", kernel_name)->required();

  CLI::App* c_square = check_cmd->add_subcommand("square-commutes");
  with_input(c_square);
  c_square->add_option("--alpha", alpha)->required();
  c_square->add_option("--beta", beta)->required();

  CLI::App* c_inter = check_cmd->add_subcommand("interchange");
  with_input(c_inter);
  c_inter->add_option("--gamma1", gamma1)->required();
  c_inter->add_option("--xi1", xi1)->required();
  c_inter->add_option("--gamma2", gamma2)->required();
  c_inter->add_option("--xi2", xi2)->required();
  c_inter->add_option("--p1", p1)->required();
  c_inter->add_option("--q1", q1)->required();
  c_inter->add_option("--p2", p2)->required();
  c_inter->add_option("--q2", q2)->required();
  c_inter->add_option("--p3", p3)->required();
  c_inter->add_option("--q3", q3)->required();

  CLI::App* c_inv = check_cmd->add_subcommand("left-invariance");
  with_input(c_inv);
  c_inv->add_option("--groupoid", groupoid_name)->required();
  c_inv->add_option("--weights", weights_name)->required();

  CLI::App* c_haar = check_cmd->add_subcommand("haar");
  with_input(c_haar);
  c_haar->add_option("--groupoid", groupoid_name)->required();
  c_haar->add_option("--weights", weights_name)->required();

  CLI::App* c_pl = check_cmd->add_subcommand("pi-lambda");
  with_input(c_pl);
  c_pl->add_option("--pi", pi_name)->required();
  c_pl->add_option("--dynkin", dynkin_name)->required();

  CLI::App* c_dis = check_cmd->add_subcommand("disintegration");
  with_input(c_dis);
  c_dis->add_option("--kernel", kernel_name)->required();
  c_dis->add_option("--map", map_name)->required();
  c_dis->add_option("--mu", mu_name)->required();
  c_dis->add_option("--nu", nu_name)->required();

  CLI::App* haar_cmd = app.add_subcommand("haar-verify", "full Haar verification with per-property lines");
  with_input(haar_cmd);
  haar_cmd->add_option("--groupoid", groupoid_name)->required();
  haar_cmd->add_option("--weights", weights_name)->required();

  CLI::App* report_cmd = app.add_subcommand("report", "run every applicable check and summarize");
  with_input(report_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    std::cout << "ERROR " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    std::uint64_t seed = env_seed();
    Document doc = load(input);
    if (output.empty()) output = input;
    int worst = kExitPass;

    if (*compose_cmd) {
      const NamedKernel& a = doc.kernel(alpha);
      const NamedKernel& b = doc.kernel(beta);
      Kernel composed = compose(a.kernel, b.kernel);
      add_map(doc, name + "_map", composed.base_map());
      add_kernel(doc, name, name + "_map", std::move(composed));
      store(doc, output);
    } else if (*lift_cmd) {
      if (side != "right" && side != "left")
        throw InputError("--side must be 'right' or 'left'");
      const NamedKernel& k = doc.kernel(kernel_name);
      const SpaceMap& other = doc.map_named(along);
      Pullback pb = side == "right" ? Pullback(k.kernel.base_map(), other)
                                    : Pullback(other, k.kernel.base_map());
      Kernel lifted = side == "right" ? lift_right(pb, k.kernel) : lift_left(pb, k.kernel);
      add_space(doc, pb.space());
      add_map(doc, name + "_projL", pb.proj_left());
      add_map(doc, name + "_projR", pb.proj_right());
      add_kernel(doc, name, side == "right" ? name + "_projR" : name + "_projL",
                 std::move(lifted));
      store(doc, output);
    } else if (*fibre_cmd) {
      const NamedKernel& gx = doc.kernel(alpha);
      const NamedKernel& gy = doc.kernel(beta);
      Pullback lower(doc.map_named(p1), doc.map_named(q1));
      Pullback upper(doc.map_named(p2), doc.map_named(q2));
      FibredSquare square(gx.kernel.base_map(), gy.kernel.base_map(), lower, upper);
      Kernel product = fibred_product_kernel(gx.kernel, gy.kernel, square);
      add_space(doc, square.lower().space());
      add_space(doc, square.upper().space());
      add_map(doc, name + "_map", square.fg());
      add_kernel(doc, name, name + "_map", std::move(product));
      store(doc, output);
    } else if (*disintegrate_cmd) {
      MeasuredMap mm(doc.map_named(map_name), doc.measure(mu_name), doc.measure(nu_name));
      Kernel gamma = disintegrate(mm);
      add_kernel(doc, name, map_name, std::move(gamma));
      store(doc, output);
    } else if (*c_conc) {
      emit("concentration kernel=" + kernel_name, check_concentration(doc.kernel(kernel_name)),
           worst);
    } else if (*c_pos) {
      emit("positivity kernel=" + kernel_name, check_positivity(doc.kernel(kernel_name)),
           worst);
    } else if (*c_square) {
      emit("square-commutes alpha=" + alpha + " beta=" + beta,
           check_square_cmd(doc.kernel(alpha).kernel, doc.kernel(beta).kernel), worst);
    } else if (*c_inter) {
      emit("interchange gamma1=" + gamma1 + " xi1=" + xi1 + " gamma2=" + gamma2 +
               " xi2=" + xi2,
           check_interchange_cmd(doc, gamma1, xi1, gamma2, xi2, p1, q1, p2, q2, p3, q3),
           worst);
    } else if (*c_inv) {
      emit("left-invariance groupoid=" + groupoid_name + " weights=" + weights_name,
           check_left_invariance(doc.groupoid(groupoid_name), doc.measure(weights_name), seed),
           worst);
    } else if (*c_haar) {
      emit("haar groupoid=" + groupoid_name + " weights=" + weights_name,
           check_haar(doc.groupoid(groupoid_name), doc.measure(weights_name), seed), worst);
    } else if (*c_pl) {
      emit("pi-lambda pi=" + pi_name + " dynkin=" + dynkin_name,
           check_pi_lambda(doc.family(pi_name), doc.family(dynkin_name)), worst);
    } else if (*c_dis) {
      MeasuredMap mm(doc.map_named(map_name), doc.measure(mu_name), doc.measure(nu_name));
      emit("disintegration kernel=" + kernel_name + " mu=" + mu_name + " nu=" + nu_name,
           check_disintegration(mm, doc.kernel(kernel_name).kernel), worst);
    } else if (*haar_cmd) {
      const FiniteGroupoid& g = doc.groupoid(groupoid_name);
      const Measure& w = doc.measure(weights_name);
      std::string args = "groupoid=" + groupoid_name + " weights=" + weights_name;
      CheckResult inv = check_left_invariance(g, w, seed);
      emit("left-invariance " + args, inv, worst);
      CheckResult pos = check_positivity(NamedKernel{"", range_system(g, w)});
      emit("positivity " + args, pos, worst);
      CheckResult haar;
      haar.pass = inv.pass && pos.pass;
      emit("haar " + args, haar, worst);
    } else if (*report_cmd) {
      worst = run_report(doc, seed);
    }

    return worst;
  } catch (const ConcentrationError& e) {
    std::cout << "VIOLATION " << e.what() << "\n";
    return kExitViolation;
  } catch (const GroupoidAxiomError& e) {
    std::cout << "VIOLATION " << e.what() << "\n";
    return kExitViolation;
  } catch (const Error& e) {
    std::cout << "ERROR " << e.what() << "\n";
    return kExitInputError;
  }
}
