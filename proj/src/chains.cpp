#include "opgeo/chains.hpp"

#include <cmath>

#include "opgeo/errors.hpp"
#include "opgeo/means.hpp"

namespace opgeo {

const SymMatrix& Bindings::mat(const std::string& name) const {
  auto it = mats.find(name);
  if (it == mats.end()) throw ConfigError("no matrix bound to '" + name + "'");
  return it->second;
}

double Bindings::scalar(const std::string& name) const {
  auto it = scalars.find(name);
  if (it == scalars.end()) throw ConfigError("no scalar bound to '" + name + "'");
  return it->second;
}

const ScalarFn& Bindings::fn_ref() const {
  if (!fn) throw ConfigError("chain term needs a function but none is bound");
  return *fn;
}

TermValue evaluate_term(const Term& term, const Bindings& b, EvalLog* log) {
  EvalLog scratch;
  try {
    return term.eval(b, log ? *log : scratch);
  } catch (const TermEvalError&) {
    throw;
  } catch (const Error& e) {
    throw TermEvalError("term '" + term.label + "': " + e.what());
  }
}

bool ChainSpec::admits(const ScalarFn& f) const {
  if (!has_fn_slot) return false;
  for (FnFlag flag : fn_required_flags) {
    if (!f.has(flag)) return false;
  }
  return true;
}

namespace {

// --- term helpers -----------------------------------------------------------

Term mterm(std::string label, std::function<SymMatrix(const Bindings&, EvalLog&)> f) {
  return Term{std::move(label),
              [f = std::move(f)](const Bindings& b, EvalLog& log) -> TermValue { return f(b, log); }};
}

Term sterm(std::string label, std::function<double(const Bindings&, EvalLog&)> f) {
  return Term{std::move(label),
              [f = std::move(f)](const Bindings& b, EvalLog& log) -> TermValue { return f(b, log); }};
}

SymMatrix fA(const Bindings& b, const std::string& name) {
  return matrix_function(b.mat(name), b.fn_ref());
}

SymMatrix integ(const Bindings& b, EvalLog& log, double lo, double hi,
                const std::function<SymMatrix(double)>& g) {
  QuadResult r = integrate_matrix(g, lo, hi, b.quad);
  log.quad_errors.push_back(r.err_estimate);
  return r.value;
}

double sinteg(const Bindings& b, EvalLog& log, double lo, double hi,
              const std::function<double(double)>& g) {
  // Locally adaptive: scalar terms may integrate an operator norm along the
  // mean path, which is only piecewise smooth.
  ScalarQuadResult r = integrate_scalar(g, lo, hi, b.quad);
  log.quad_errors.push_back(r.err_estimate);
  return r.value;
}

SymMatrix inverse(const SymMatrix& m, const std::string& operand) {
  return matrix_power(m, -1.0, operand);
}

// f(A) #_t f(B) as a function of t, reusing the two matrix functions.
std::function<SymMatrix(double)> sharp_of_images(const Bindings& b) {
  auto fa = std::make_shared<SymMatrix>(fA(b, "A"));
  auto fb = std::make_shared<SymMatrix>(fA(b, "B"));
  return [fa, fb](double t) { return gmean_t(*fa, *fb, t); };
}

// --- hypothesis helpers ------------------------------------------------------

Hypothesis hyp_fA_leq_fB() {
  return {"f(A) <= f(B)", [](const Bindings& b, double tol) {
            return hypothesis_fA_leq_fB(b.fn_ref(), b.mat("A"), b.mat("B"), tol);
          }};
}

Hypothesis hyp_scalar_in(const std::string& name, double lo, double hi, bool lo_open, bool hi_open,
                         const std::string& label) {
  return {label, [name, lo, hi, lo_open, hi_open](const Bindings& b, double) {
            const double x = b.scalar(name);
            if (lo_open ? !(x > lo) : !(x >= lo)) return false;
            if (hi_open ? !(x < hi) : !(x <= hi)) return false;
            return true;
          }};
}

Hypothesis hyp_loewner(const std::string& lo, const std::string& hi) {
  return {lo + " <= " + hi, [lo, hi](const Bindings& b, double tol) {
            return loewner_leq(b.mat(lo), b.mat(hi), tol).ordered;
          }};
}

Hypothesis hyp_contractions() {
  return {"||A|| < 1 and ||B|| < 1", [](const Bindings& b, double) {
            return operator_norm(b.mat("A")) < 1.0 && operator_norm(b.mat("B")) < 1.0;
          }};
}

Hypothesis hyp_block_psd() {
  return {"[[A,X],[X,B]] >= 0", [](const Bindings& b, double tol) {
            return block2_psd(b.mat("A"), b.mat("X"), b.mat("B"), tol);
          }};
}

Hypothesis hyp_posmap_pd() {
  return {"Psi(A) and Psi(B) positive definite", [](const Bindings& b, double) {
            if (!b.posmap) throw ConfigError("pos-map chain needs a positive linear map binding");
            for (const char* name : {"A", "B"}) {
              SpectralDecomposition d = spectral_decompose(b.posmap->apply(b.mat(name)));
              if (!(d.eigenvalues.front() > 1e-12 * d.eigenvalues.back())) return false;
            }
            return true;
          }};
}

Hypothesis hyp_norm_le() {
  return {"||A|| <= ||B||", [](const Bindings& b, double) {
            return operator_norm(b.mat("A")) <= operator_norm(b.mat("B"));
          }};
}

Hypothesis hyp_a_lt_b() {
  return {"a < b", [](const Bindings& b, double) { return b.scalar("a") < b.scalar("b"); }};
}

Hypothesis hyp_t_le_s() {
  return {"0 <= t <= s", [](const Bindings& b, double) {
            return 0.0 <= b.scalar("t") && b.scalar("t") <= b.scalar("s");
          }};
}

// --- registry ----------------------------------------------------------------

std::vector<ChainSpec> build_registry() {
  std::vector<ChainSpec> reg;

  // Interpolation identity of the weighted mean.
  {
    ChainSpec c;
    c.id = "mean-interp";
    c.statement = "(A#_t B)#_s (A#_u B) = A#_{(1-s)t+su} B for all real t, s, u";
    c.relation = Relation::equality;
    c.profile = InputProfile::spd_pair;
    c.scalar_params = {{"t", 0, 1}, {"s", 0, 1}, {"u", 0, 1}};
    c.terms = {
        mterm("(A#_t B)#_s (A#_u B)",
              [](const Bindings& b, EvalLog&) {
                const SymMatrix& a = b.mat("A");
                const SymMatrix& bb = b.mat("B");
                return gmean_t(gmean_t(a, bb, b.scalar("t")), gmean_t(a, bb, b.scalar("u")),
                               b.scalar("s"));
              }),
        mterm("A#_{(1-s)t+su} B",
              [](const Bindings& b, EvalLog&) {
                const double w = (1.0 - b.scalar("s")) * b.scalar("t") + b.scalar("s") * b.scalar("u");
                return gmean_t(b.mat("A"), b.mat("B"), w);
              }),
    };
    reg.push_back(std::move(c));
  }

  // Joint monotonicity of the weighted mean.
  {
    ChainSpec c;
    c.id = "mean-mono";
    c.statement = "A <= C and B <= D imply A#_t B <= C#_t D, t in [0,1]";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::quad_ordered;
    c.hypotheses = {hyp_loewner("A", "C"), hyp_loewner("B", "D"),
                    hyp_scalar_in("t", 0, 1, false, false, "t in [0,1]")};
    c.scalar_params = {{"t", 0, 1}};
    c.terms = {
        mterm("A#_t B", [](const Bindings& b, EvalLog&) {
          return gmean_t(b.mat("A"), b.mat("B"), b.scalar("t"));
        }),
        mterm("C#_t D", [](const Bindings& b, EvalLog&) {
          return gmean_t(b.mat("C"), b.mat("D"), b.scalar("t"));
        }),
    };
    reg.push_back(std::move(c));
  }

  // Superadditivity of the mean under the integral.
  {
    ChainSpec c;
    c.id = "int-superadd";
    c.statement =
        "int01 f(A#_t B)#f(A#_{1-t} B) dt <= (int01 f(A#_t B) dt)#(int01 f(A#_{1-t} B) dt)";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::spd_pair;
    c.has_fn_slot = true;
    c.default_fn = "inv";
    c.terms = {
        mterm("int01 f(A#_t B)#f(A#_{1-t} B) dt",
              [](const Bindings& b, EvalLog& log) {
                const SymMatrix& a = b.mat("A");
                const SymMatrix& bb = b.mat("B");
                return integ(b, log, 0, 1, [&](double t) {
                  return gmean(matrix_function(gmean_t(a, bb, t), b.fn_ref()),
                               matrix_function(gmean_t(a, bb, 1.0 - t), b.fn_ref()));
                });
              }),
        mterm("(int01 f(A#_t B) dt)#(int01 f(A#_{1-t} B) dt)",
              [](const Bindings& b, EvalLog& log) {
                const SymMatrix& a = b.mat("A");
                const SymMatrix& bb = b.mat("B");
                SymMatrix left = integ(b, log, 0, 1, [&](double t) {
                  return matrix_function(gmean_t(a, bb, t), b.fn_ref());
                });
                SymMatrix right = integ(b, log, 0, 1, [&](double t) {
                  return matrix_function(gmean_t(a, bb, 1.0 - t), b.fn_ref());
                });
                return gmean(left, right);
              }),
    };
    reg.push_back(std::move(c));
  }

  // Power comparison on [1, inf).
  {
    ChainSpec c;
    c.id = "power-cmp";
    c.statement = "f(A) <= f(B), 0 <= t <= s imply R^t <= R^s for R = f(A)^{-1/2} f(B) f(A)^{-1/2}";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::ordered_pair;
    c.has_fn_slot = true;
    c.default_fn = "inv";
    c.hypotheses = {hyp_fA_leq_fB(), hyp_t_le_s()};
    c.scalar_params = {{"t", 0, 1.5}, {"s", 0, 1.5}};
    auto ratio = [](const Bindings& b) {
      SymMatrix fa = fA(b, "A");
      SymMatrix fb = fA(b, "B");
      SymMatrix fam = matrix_power(fa, -0.5, "f(A)");
      return sym_from_product(fam.to_matrix() * fb.to_matrix() * fam.to_matrix());
    };
    c.terms = {
        mterm("R^t", [ratio](const Bindings& b, EvalLog&) {
          return matrix_power(ratio(b), b.scalar("t"), "R");
        }),
        mterm("R^s", [ratio](const Bindings& b, EvalLog&) {
          return matrix_power(ratio(b), b.scalar("s"), "R");
        }),
    };
    reg.push_back(std::move(c));
  }

  // Two-sided mean-value sandwich, unconditioned form.
  {
    ChainSpec c;
    c.id = "hh-mr";
    c.statement = "f(A#B) <= int01 f(A#_t B) dt <= int01 f(A)#_t f(B) dt";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::spd_pair;
    c.has_fn_slot = true;
    c.fn_required_flags = {FnFlag::operator_geometrically_convex};
    c.default_fn = "inv";
    c.terms = {
        mterm("f(A#B)",
              [](const Bindings& b, EvalLog&) {
                return matrix_function(gmean(b.mat("A"), b.mat("B")), b.fn_ref());
              }),
        mterm("int01 f(A#_t B) dt",
              [](const Bindings& b, EvalLog& log) {
                const SymMatrix& a = b.mat("A");
                const SymMatrix& bb = b.mat("B");
                return integ(b, log, 0, 1, [&](double t) {
                  return matrix_function(gmean_t(a, bb, t), b.fn_ref());
                });
              }),
        mterm("int01 f(A)#_t f(B) dt",
              [](const Bindings& b, EvalLog& log) {
                return integ(b, log, 0, 1, sharp_of_images(b));
              }),
    };
    reg.push_back(std::move(c));
  }

  // Refinement under the ordered-images hypothesis.
  {
    ChainSpec c;
    c.id = "hh-mr123";
    c.statement =
        "f(A) <= f(B): int01 f(A#_t B) dt <= int01 f(A)#_t f(B) dt <= (f(A)#f(B) + f(B))/2";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::ordered_pair;
    c.has_fn_slot = true;
    c.fn_required_flags = {FnFlag::operator_geometrically_convex};
    c.default_fn = "inv";
    c.hypotheses = {hyp_fA_leq_fB()};
    c.terms = {
        mterm("int01 f(A#_t B) dt",
              [](const Bindings& b, EvalLog& log) {
                const SymMatrix& a = b.mat("A");
                const SymMatrix& bb = b.mat("B");
                return integ(b, log, 0, 1, [&](double t) {
                  return matrix_function(gmean_t(a, bb, t), b.fn_ref());
                });
              }),
        mterm("int01 f(A)#_t f(B) dt",
              [](const Bindings& b, EvalLog& log) {
                return integ(b, log, 0, 1, sharp_of_images(b));
              }),
        mterm("(f(A)#f(B) + f(B))/2",
              [](const Bindings& b, EvalLog&) {
                SymMatrix fa = fA(b, "A");
                SymMatrix fb = fA(b, "B");
                return 0.5 * (gmean(fa, fb) + fb);
              }),
    };
    reg.push_back(std::move(c));
  }

  // Endpoint form of the refinement.
  {
    ChainSpec c;
    c.id = "hh-mr222";
    c.statement = "f(A) <= f(B): f(A#B) <= int01 f(A#_t B) dt <= (f(A)#f(B) + f(B))/2";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::ordered_pair;
    c.has_fn_slot = true;
    c.fn_required_flags = {FnFlag::operator_geometrically_convex};
    c.default_fn = "inv";
    c.hypotheses = {hyp_fA_leq_fB()};
    c.terms = {
        mterm("f(A#B)",
              [](const Bindings& b, EvalLog&) {
                return matrix_function(gmean(b.mat("A"), b.mat("B")), b.fn_ref());
              }),
        mterm("int01 f(A#_t B) dt",
              [](const Bindings& b, EvalLog& log) {
                const SymMatrix& a = b.mat("A");
                const SymMatrix& bb = b.mat("B");
                return integ(b, log, 0, 1, [&](double t) {
                  return matrix_function(gmean_t(a, bb, t), b.fn_ref());
                });
              }),
        mterm("(f(A)#f(B) + f(B))/2",
              [](const Bindings& b, EvalLog&) {
                SymMatrix fa = fA(b, "A");
                SymMatrix fb = fA(b, "B");
                return 0.5 * (gmean(fa, fb) + fb);
              }),
    };
    reg.push_back(std::move(c));
  }

  // Sandwich through the symmetrized integrand.  The middle term is not known
  // to coincide with int01 f(A#_t B) dt, so that comparison is reported as an
  // informational link only.
  {
    ChainSpec c;
    c.id = "hh-mche";
    c.statement = "f(A#B) <= int01 f(A#_t B)#f(A#_{1-t} B) dt <= f(A)#f(B)";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::spd_pair;
    c.has_fn_slot = true;
    c.fn_required_flags = {FnFlag::operator_geometrically_convex};
    c.default_fn = "inv";
    c.terms = {
        mterm("f(A#B)",
              [](const Bindings& b, EvalLog&) {
                return matrix_function(gmean(b.mat("A"), b.mat("B")), b.fn_ref());
              }),
        mterm("int01 f(A#_t B)#f(A#_{1-t} B) dt",
              [](const Bindings& b, EvalLog& log) {
                const SymMatrix& a = b.mat("A");
                const SymMatrix& bb = b.mat("B");
                return integ(b, log, 0, 1, [&](double t) {
                  return gmean(matrix_function(gmean_t(a, bb, t), b.fn_ref()),
                               matrix_function(gmean_t(a, bb, 1.0 - t), b.fn_ref()));
                });
              }),
        mterm("f(A)#f(B)",
              [](const Bindings& b, EvalLog&) { return gmean(fA(b, "A"), fA(b, "B")); }),
    };
    c.info_link = InfoLink{1, mterm("int01 f(A#_t B) dt", [](const Bindings& b, EvalLog& log) {
                             const SymMatrix& a = b.mat("A");
                             const SymMatrix& bb = b.mat("B");
                             return integ(b, log, 0, 1, [&](double t) {
                               return matrix_function(gmean_t(a, bb, t), b.fn_ref());
                             });
                           })};
    reg.push_back(std::move(c));
  }

  // Sub-interval averages of the image interpolation, nu below 1/2.
  {
    ChainSpec c;
    c.id = "sta-low";
    c.statement =
        "f(A) <= f(B), nu in [0,1/2): f(A)#_nu f(B) <= avg_[nu,1-nu] f(A)#_t f(B) dt <= "
        "f(A)#_{1-nu} f(B)";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::ordered_pair;
    c.has_fn_slot = true;
    c.fn_required_flags = {FnFlag::operator_geometrically_convex};
    c.default_fn = "inv";
    c.hypotheses = {hyp_fA_leq_fB(), hyp_scalar_in("nu", 0, 0.5, false, true, "nu in [0,1/2)")};
    c.scalar_params = {{"nu", 0, 0.49}};
    c.terms = {
        mterm("f(A)#_nu f(B)",
              [](const Bindings& b, EvalLog&) {
                return gmean_t(fA(b, "A"), fA(b, "B"), b.scalar("nu"));
              }),
        mterm("avg_[nu,1-nu] f(A)#_t f(B) dt",
              [](const Bindings& b, EvalLog& log) {
                const double nu = b.scalar("nu");
                return (1.0 / (1.0 - 2.0 * nu)) *
                       integ(b, log, nu, 1.0 - nu, sharp_of_images(b));
              }),
        mterm("f(A)#_{1-nu} f(B)",
              [](const Bindings& b, EvalLog&) {
                return gmean_t(fA(b, "A"), fA(b, "B"), 1.0 - b.scalar("nu"));
              }),
    };
    reg.push_back(std::move(c));
  }

  // Mirror for nu above 1/2.
  {
    ChainSpec c;
    c.id = "sta-high";
    c.statement =
        "f(A) <= f(B), nu in (1/2,1]: f(A)#_{1-nu} f(B) <= avg_[1-nu,nu] f(A)#_t f(B) dt <= "
        "f(A)#_nu f(B)";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::ordered_pair;
    c.has_fn_slot = true;
    c.fn_required_flags = {FnFlag::operator_geometrically_convex};
    c.default_fn = "inv";
    c.hypotheses = {hyp_fA_leq_fB(), hyp_scalar_in("nu", 0.5, 1, true, false, "nu in (1/2,1]")};
    c.scalar_params = {{"nu", 0.51, 1}};
    c.terms = {
        mterm("f(A)#_{1-nu} f(B)",
              [](const Bindings& b, EvalLog&) {
                return gmean_t(fA(b, "A"), fA(b, "B"), 1.0 - b.scalar("nu"));
              }),
        mterm("avg_[1-nu,nu] f(A)#_t f(B) dt",
              [](const Bindings& b, EvalLog& log) {
                const double nu = b.scalar("nu");
                return (1.0 / (2.0 * nu - 1.0)) *
                       integ(b, log, 1.0 - nu, nu, sharp_of_images(b));
              }),
        mterm("f(A)#_nu f(B)",
              [](const Bindings& b, EvalLog&) {
                return gmean_t(fA(b, "A"), fA(b, "B"), b.scalar("nu"));
              }),
    };
    reg.push_back(std::move(c));
  }

  // Four-term version that starts inside f, nu below 1/2.
  {
    ChainSpec c;
    c.id = "sta-f-low";
    c.statement =
        "f(A) <= f(B), nu in [0,1/2): f(A#_nu B) <= avg_[nu,1-nu] f(A#_t B) dt <= "
        "avg_[nu,1-nu] f(A)#_t f(B) dt <= f(A)#_{1-nu} f(B)";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::ordered_pair;
    c.has_fn_slot = true;
    c.fn_required_flags = {FnFlag::operator_geometrically_convex};
    c.default_fn = "inv";
    c.hypotheses = {hyp_fA_leq_fB(), hyp_scalar_in("nu", 0, 0.5, false, true, "nu in [0,1/2)")};
    c.scalar_params = {{"nu", 0, 0.49}};
    c.terms = {
        mterm("f(A#_nu B)",
              [](const Bindings& b, EvalLog&) {
                return matrix_function(gmean_t(b.mat("A"), b.mat("B"), b.scalar("nu")), b.fn_ref());
              }),
        mterm("avg_[nu,1-nu] f(A#_t B) dt",
              [](const Bindings& b, EvalLog& log) {
                const double nu = b.scalar("nu");
                const SymMatrix& a = b.mat("A");
                const SymMatrix& bb = b.mat("B");
                return (1.0 / (1.0 - 2.0 * nu)) * integ(b, log, nu, 1.0 - nu, [&](double t) {
                         return matrix_function(gmean_t(a, bb, t), b.fn_ref());
                       });
              }),
        mterm("avg_[nu,1-nu] f(A)#_t f(B) dt",
              [](const Bindings& b, EvalLog& log) {
                const double nu = b.scalar("nu");
                return (1.0 / (1.0 - 2.0 * nu)) *
                       integ(b, log, nu, 1.0 - nu, sharp_of_images(b));
              }),
        mterm("f(A)#_{1-nu} f(B)",
              [](const Bindings& b, EvalLog&) {
                return gmean_t(fA(b, "A"), fA(b, "B"), 1.0 - b.scalar("nu"));
              }),
    };
    reg.push_back(std::move(c));
  }

  // Mirror of the four-term version for nu above 1/2.
  {
    ChainSpec c;
    c.id = "sta-f-high";
    c.statement =
        "f(A) <= f(B), nu in (1/2,1]: f(A#_{1-nu} B) <= avg_[1-nu,nu] f(A#_t B) dt <= "
        "avg_[1-nu,nu] f(A)#_t f(B) dt <= f(A)#_nu f(B)";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::ordered_pair;
    c.has_fn_slot = true;
    c.fn_required_flags = {FnFlag::operator_geometrically_convex};
    c.default_fn = "inv";
    c.hypotheses = {hyp_fA_leq_fB(), hyp_scalar_in("nu", 0.5, 1, true, false, "nu in (1/2,1]")};
    c.scalar_params = {{"nu", 0.51, 1}};
    c.terms = {
        mterm("f(A#_{1-nu} B)",
              [](const Bindings& b, EvalLog&) {
                return matrix_function(gmean_t(b.mat("A"), b.mat("B"), 1.0 - b.scalar("nu")),
                                       b.fn_ref());
              }),
        mterm("avg_[1-nu,nu] f(A#_t B) dt",
              [](const Bindings& b, EvalLog& log) {
                const double nu = b.scalar("nu");
                const SymMatrix& a = b.mat("A");
                const SymMatrix& bb = b.mat("B");
                return (1.0 / (2.0 * nu - 1.0)) * integ(b, log, 1.0 - nu, nu, [&](double t) {
                         return matrix_function(gmean_t(a, bb, t), b.fn_ref());
                       });
              }),
        mterm("avg_[1-nu,nu] f(A)#_t f(B) dt",
              [](const Bindings& b, EvalLog& log) {
                const double nu = b.scalar("nu");
                return (1.0 / (2.0 * nu - 1.0)) *
                       integ(b, log, 1.0 - nu, nu, sharp_of_images(b));
              }),
        mterm("f(A)#_nu f(B)",
              [](const Bindings& b, EvalLog&) {
                return gmean_t(fA(b, "A"), fA(b, "B"), b.scalar("nu"));
              }),
    };
    reg.push_back(std::move(c));
  }

  // The defining inequality itself.
  {
    ChainSpec c;
    c.id = "geo-def";
    c.statement = "f(A#_t B) <= f(A)#_t f(B), t in [0,1]";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::spd_pair;
    c.has_fn_slot = true;
    c.fn_required_flags = {FnFlag::operator_geometrically_convex};
    c.default_fn = "inv";
    c.hypotheses = {hyp_scalar_in("t", 0, 1, false, false, "t in [0,1]")};
    c.scalar_params = {{"t", 0, 1}};
    c.terms = {
        mterm("f(A#_t B)",
              [](const Bindings& b, EvalLog&) {
                return matrix_function(gmean_t(b.mat("A"), b.mat("B"), b.scalar("t")), b.fn_ref());
              }),
        mterm("f(A)#_t f(B)",
              [](const Bindings& b, EvalLog&) {
                return gmean_t(fA(b, "A"), fA(b, "B"), b.scalar("t"));
              }),
    };
    reg.push_back(std::move(c));
  }

  // Resolvent comparison on contractions.
  {
    ChainSpec c;
    c.id = "resolvent-ineq";
    c.statement = "||A||,||B|| < 1: (I - A#B)^{-1} <= (I-A)^{-1} # (I-B)^{-1}";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::contraction_pair;
    c.hypotheses = {hyp_contractions()};
    c.terms = {
        mterm("(I - A#B)^{-1}",
              [](const Bindings& b, EvalLog&) {
                SymMatrix g = gmean(b.mat("A"), b.mat("B"));
                return inverse(SymMatrix::identity(g.dim()) - g, "I - A#B");
              }),
        mterm("(I-A)^{-1} # (I-B)^{-1}",
              [](const Bindings& b, EvalLog&) {
                const SymMatrix& a = b.mat("A");
                const SymMatrix& bb = b.mat("B");
                SymMatrix ia = inverse(SymMatrix::identity(a.dim()) - a, "I - A");
                SymMatrix ib = inverse(SymMatrix::identity(bb.dim()) - bb, "I - B");
                return gmean(ia, ib);
              }),
    };
    reg.push_back(std::move(c));
  }

  // Maximality of the midpoint mean among symmetric block fillers.
  {
    ChainSpec c;
    c.id = "ando-max";
    c.statement = "[[A,X],[X,B]] >= 0 implies X <= A#B";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::ando_perturbed;
    c.hypotheses = {hyp_block_psd()};
    c.terms = {
        mterm("X", [](const Bindings& b, EvalLog&) { return b.mat("X"); }),
        mterm("A#B", [](const Bindings& b, EvalLog&) { return gmean(b.mat("A"), b.mat("B")); }),
    };
    reg.push_back(std::move(c));
  }

  // The mean's defining block matrix is positive semidefinite.
  {
    ChainSpec c;
    c.id = "psd-block";
    c.statement = "[[A, A#B],[A#B, B]] >= 0";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::spd_pair;
    c.terms = {
        mterm("0", [](const Bindings& b, EvalLog&) { return SymMatrix::zero(2 * b.mat("A").dim()); }),
        mterm("[[A, A#B],[A#B, B]]",
              [](const Bindings& b, EvalLog&) {
                const SymMatrix& a = b.mat("A");
                const SymMatrix& bb = b.mat("B");
                return block2(a, gmean(a, bb), bb);
              }),
    };
    reg.push_back(std::move(c));
  }

  // Positive linear maps are subadditive for the mean.
  {
    ChainSpec c;
    c.id = "pos-map";
    c.statement = "Psi(A#B) <= Psi(A)#Psi(B) for positive linear Psi";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::posmap_pair;
    c.hypotheses = {hyp_posmap_pd()};
    c.terms = {
        mterm("Psi(A#B)",
              [](const Bindings& b, EvalLog&) {
                if (!b.posmap) throw ConfigError("pos-map chain needs a positive linear map binding");
                return b.posmap->apply(gmean(b.mat("A"), b.mat("B")));
              }),
        mterm("Psi(A)#Psi(B)",
              [](const Bindings& b, EvalLog&) {
                if (!b.posmap) throw ConfigError("pos-map chain needs a positive linear map binding");
                return gmean(b.posmap->apply(b.mat("A")), b.posmap->apply(b.mat("B")));
              }),
    };
    reg.push_back(std::move(c));
  }

  // Operator norm is geometrically convex in the mean parameter.
  {
    ChainSpec c;
    c.id = "norm-geo";
    c.statement = "||A#_alpha B|| <= ||A||^{1-alpha} ||B||^alpha, alpha in [0,1]";
    c.relation = Relation::scalar_chain;
    c.profile = InputProfile::spd_pair;
    c.hypotheses = {hyp_scalar_in("alpha", 0, 1, false, false, "alpha in [0,1]")};
    c.scalar_params = {{"alpha", 0, 1}};
    c.terms = {
        sterm("||A#_alpha B||",
              [](const Bindings& b, EvalLog&) {
                return operator_norm(gmean_t(b.mat("A"), b.mat("B"), b.scalar("alpha")));
              }),
        sterm("||A||^{1-alpha} ||B||^alpha",
              [](const Bindings& b, EvalLog&) {
                const double alpha = b.scalar("alpha");
                return std::pow(operator_norm(b.mat("A")), 1.0 - alpha) *
                       std::pow(operator_norm(b.mat("B")), alpha);
              }),
    };
    reg.push_back(std::move(c));
  }

  // Norm corollary of the mean-value sandwich.
  {
    ChainSpec c;
    c.id = "norm-cor";
    c.statement = "||A|| <= ||B||: ||A#B|| <= int01 ||A#_t B|| dt <= (sqrt(||A|| ||B||) + ||B||)/2";
    c.relation = Relation::scalar_chain;
    c.profile = InputProfile::spd_pair;
    c.hypotheses = {hyp_norm_le()};
    c.terms = {
        sterm("||A#B||",
              [](const Bindings& b, EvalLog&) {
                return operator_norm(gmean(b.mat("A"), b.mat("B")));
              }),
        sterm("int01 ||A#_t B|| dt",
              [](const Bindings& b, EvalLog& log) {
                const SymMatrix& a = b.mat("A");
                const SymMatrix& bb = b.mat("B");
                return sinteg(b, log, 0, 1,
                              [&](double t) { return operator_norm(gmean_t(a, bb, t)); });
              }),
        sterm("(sqrt(||A|| ||B||) + ||B||)/2",
              [](const Bindings& b, EvalLog&) {
                const double na = operator_norm(b.mat("A"));
                const double nb = operator_norm(b.mat("B"));
                return 0.5 * (std::sqrt(na * nb) + nb);
              }),
    };
    reg.push_back(std::move(c));
  }

  // Classical two-sided bound on the mean value of a convex function.
  {
    ChainSpec c;
    c.id = "scalar-hh";
    c.statement = "(b-a) f((a+b)/2) <= int_a^b f <= (b-a)(f(a)+f(b))/2";
    c.relation = Relation::scalar_chain;
    c.profile = InputProfile::scalar_interval;
    c.has_fn_slot = true;
    c.fn_required_flags = {FnFlag::convex};
    c.default_fn = "square";
    c.hypotheses = {hyp_a_lt_b()};
    c.terms = {
        sterm("(b-a) f((a+b)/2)",
              [](const Bindings& b, EvalLog&) {
                const double lo = b.scalar("a"), hi = b.scalar("b");
                return (hi - lo) * b.fn_ref().eval(0.5 * (lo + hi));
              }),
        sterm("int_a^b f",
              [](const Bindings& b, EvalLog& log) {
                return sinteg(b, log, b.scalar("a"), b.scalar("b"), b.fn_ref().eval);
              }),
        sterm("(b-a)(f(a)+f(b))/2",
              [](const Bindings& b, EvalLog&) {
                const double lo = b.scalar("a"), hi = b.scalar("b");
                return 0.5 * (hi - lo) * (b.fn_ref().eval(lo) + b.fn_ref().eval(hi));
              }),
    };
    reg.push_back(std::move(c));
  }

  // Five-term refinement of the classical bound.
  {
    ChainSpec c;
    c.id = "scalar-hh-ref";
    c.statement =
        "f((a+b)/2) <= (f((3a+b)/4)+f((a+3b)/4))/2 <= avg_a^b f <= "
        "(f((a+b)/2)+(f(a)+f(b))/2)/2 <= (f(a)+f(b))/2";
    c.relation = Relation::scalar_chain;
    c.profile = InputProfile::scalar_interval;
    c.has_fn_slot = true;
    c.fn_required_flags = {FnFlag::convex};
    c.default_fn = "square";
    c.hypotheses = {hyp_a_lt_b()};
    c.terms = {
        sterm("f((a+b)/2)",
              [](const Bindings& b, EvalLog&) {
                return b.fn_ref().eval(0.5 * (b.scalar("a") + b.scalar("b")));
              }),
        sterm("(f((3a+b)/4)+f((a+3b)/4))/2",
              [](const Bindings& b, EvalLog&) {
                const double lo = b.scalar("a"), hi = b.scalar("b");
                return 0.5 * (b.fn_ref().eval(0.25 * (3 * lo + hi)) +
                              b.fn_ref().eval(0.25 * (lo + 3 * hi)));
              }),
        sterm("avg_a^b f",
              [](const Bindings& b, EvalLog& log) {
                const double lo = b.scalar("a"), hi = b.scalar("b");
                return sinteg(b, log, lo, hi, b.fn_ref().eval) / (hi - lo);
              }),
        sterm("(f((a+b)/2)+(f(a)+f(b))/2)/2",
              [](const Bindings& b, EvalLog&) {
                const double lo = b.scalar("a"), hi = b.scalar("b");
                return 0.5 * (b.fn_ref().eval(0.5 * (lo + hi)) +
                              0.5 * (b.fn_ref().eval(lo) + b.fn_ref().eval(hi)));
              }),
        sterm("(f(a)+f(b))/2",
              [](const Bindings& b, EvalLog&) {
                return 0.5 * (b.fn_ref().eval(b.scalar("a")) + b.fn_ref().eval(b.scalar("b")));
              }),
    };
    reg.push_back(std::move(c));
  }

  // Multiplicative mean-value chain for geometrically convex functions.
  {
    ChainSpec c;
    c.id = "scalar-geo-hh";
    c.statement =
        "f(sqrt(ab)) <= sqrt(f(a^{3/4}b^{1/4}) f(a^{1/4}b^{3/4})) <= "
        "exp((1/ln(b/a)) int_a^b ln(f(t))/t dt) <= sqrt(f(sqrt(ab))) f(a)^{1/4} f(b)^{1/4} <= "
        "sqrt(f(a) f(b))";
    c.relation = Relation::scalar_chain;
    c.profile = InputProfile::scalar_interval;
    c.has_fn_slot = true;
    c.fn_required_flags = {FnFlag::geometrically_convex};
    c.default_fn = "exp";
    c.hypotheses = {hyp_a_lt_b()};
    c.terms = {
        sterm("f(sqrt(ab))",
              [](const Bindings& b, EvalLog&) {
                return b.fn_ref().eval(std::sqrt(b.scalar("a") * b.scalar("b")));
              }),
        sterm("sqrt(f(a^{3/4}b^{1/4}) f(a^{1/4}b^{3/4}))",
              [](const Bindings& b, EvalLog&) {
                const double lo = b.scalar("a"), hi = b.scalar("b");
                const double x = std::pow(lo, 0.75) * std::pow(hi, 0.25);
                const double y = std::pow(lo, 0.25) * std::pow(hi, 0.75);
                return std::sqrt(b.fn_ref().eval(x) * b.fn_ref().eval(y));
              }),
        sterm("exp((1/ln(b/a)) int_a^b ln(f(t))/t dt)",
              [](const Bindings& b, EvalLog& log) {
                const double lo = b.scalar("a"), hi = b.scalar("b");
                const double integral = sinteg(b, log, lo, hi, [&](double t) {
                  return std::log(b.fn_ref().eval(t)) / t;
                });
                return std::exp(integral / (std::log(hi) - std::log(lo)));
              }),
        sterm("sqrt(f(sqrt(ab))) f(a)^{1/4} f(b)^{1/4}",
              [](const Bindings& b, EvalLog&) {
                const double lo = b.scalar("a"), hi = b.scalar("b");
                return std::sqrt(b.fn_ref().eval(std::sqrt(lo * hi))) *
                       std::pow(b.fn_ref().eval(lo), 0.25) * std::pow(b.fn_ref().eval(hi), 0.25);
              }),
        sterm("sqrt(f(a) f(b))",
              [](const Bindings& b, EvalLog&) {
                return std::sqrt(b.fn_ref().eval(b.scalar("a")) * b.fn_ref().eval(b.scalar("b")));
              }),
    };
    reg.push_back(std::move(c));
  }

  // Arithmetic-mean background chain for operator convex functions.
  {
    ChainSpec c;
    c.id = "opconvex-hh";
    c.statement =
        "f((A+B)/2) <= 2 int_{1/4}^{3/4} f(tA+(1-t)B) dt <= (f((3A+B)/4)+f((A+3B)/4))/2 <= "
        "int01 f((1-t)A+tB) dt <= (f((A+B)/2)+(f(A)+f(B))/2)/2 <= (f(A)+f(B))/2";
    c.relation = Relation::loewner_chain;
    c.profile = InputProfile::spd_pair;
    c.has_fn_slot = true;
    c.fn_required_flags = {FnFlag::operator_convex};
    c.default_fn = "square";
    c.terms = {
        mterm("f((A+B)/2)",
              [](const Bindings& b, EvalLog&) {
                return matrix_function(0.5 * (b.mat("A") + b.mat("B")), b.fn_ref());
              }),
        mterm("2 int_{1/4}^{3/4} f(tA+(1-t)B) dt",
              [](const Bindings& b, EvalLog& log) {
                const SymMatrix& a = b.mat("A");
                const SymMatrix& bb = b.mat("B");
                return 2.0 * integ(b, log, 0.25, 0.75, [&](double t) {
                         return matrix_function(t * a + (1.0 - t) * bb, b.fn_ref());
                       });
              }),
        mterm("(f((3A+B)/4)+f((A+3B)/4))/2",
              [](const Bindings& b, EvalLog&) {
                const SymMatrix& a = b.mat("A");
                const SymMatrix& bb = b.mat("B");
                return 0.5 * (matrix_function(0.25 * (3.0 * a + bb), b.fn_ref()) +
                              matrix_function(0.25 * (a + 3.0 * bb), b.fn_ref()));
              }),
        mterm("int01 f((1-t)A+tB) dt",
              [](const Bindings& b, EvalLog& log) {
                const SymMatrix& a = b.mat("A");
                const SymMatrix& bb = b.mat("B");
                return integ(b, log, 0, 1, [&](double t) {
                  return matrix_function((1.0 - t) * a + t * bb, b.fn_ref());
                });
              }),
        mterm("(f((A+B)/2)+(f(A)+f(B))/2)/2",
              [](const Bindings& b, EvalLog&) {
                const SymMatrix& a = b.mat("A");
                const SymMatrix& bb = b.mat("B");
                return 0.5 * (matrix_function(0.5 * (a + bb), b.fn_ref()) +
                              0.5 * (fA(b, "A") + fA(b, "B")));
              }),
        mterm("(f(A)+f(B))/2",
              [](const Bindings& b, EvalLog&) { return 0.5 * (fA(b, "A") + fA(b, "B")); }),
    };
    reg.push_back(std::move(c));
  }

  return reg;
}

// --- link evaluation ---------------------------------------------------------

LinkResult make_link(Relation rel, const std::string& llabel, const TermValue& lhs,
                     const std::string& rlabel, const TermValue& rhs, double tol) {
  LinkResult link{llabel, rlabel, 0.0, false};
  if (rel == Relation::scalar_chain) {
    const double l = std::get<double>(lhs);
    const double r = std::get<double>(rhs);
    link.slack = r - l;
    const double scale = std::max({1.0, std::abs(l), std::abs(r)});
    link.pass = link.slack >= -tol * scale;
    return link;
  }
  const SymMatrix& l = std::get<SymMatrix>(lhs);
  const SymMatrix& r = std::get<SymMatrix>(rhs);
  if (rel == Relation::equality) {
    const double scale = std::max({1.0, l.frobenius_norm(), r.frobenius_norm()});
    link.slack = (l - r).frobenius_norm() / scale;
    link.pass = link.slack <= tol;
    return link;
  }
  LoewnerResult lr = loewner_leq(l, r, tol);
  link.slack = lr.slack;
  link.pass = lr.ordered;
  return link;
}

}  // namespace

const std::vector<ChainSpec>& chain_registry() {
  static const std::vector<ChainSpec> reg = build_registry();
  return reg;
}

const ChainSpec& find_chain(const std::string& id) {
  for (const ChainSpec& c : chain_registry()) {
    if (c.id == id) return c;
  }
  std::string known;
  for (const ChainSpec& c : chain_registry()) known += (known.empty() ? "" : ", ") + c.id;
  throw LookupError("unknown chain '" + id + "'; known: " + known);
}

ChainReport check_chain(const ChainSpec& spec, const Bindings& inputs, double tol,
                        const QuadratureSpec& quad) {
  Bindings b = inputs;
  b.quad = quad;

  ChainReport report;
  report.chain_id = spec.id;
  if (!b.mats.empty()) report.digest.dim = b.mats.begin()->second.dim();
  for (const auto& [name, value] : b.scalars) report.digest.params.emplace_back(name, value);
  if (b.fn) report.digest.fn_id = b.fn->id;
  if (b.posmap) report.digest.map_id = b.posmap->id;

  // Hypotheses first; an unmet one short-circuits the whole evaluation.
  std::vector<Hypothesis> hyps = spec.hypotheses;
  if (spec.has_fn_slot && b.fn && b.fn->has(FnFlag::requires_contraction)) {
    hyps.push_back(Hypothesis{"contraction inputs (||.|| < 1)", [](const Bindings& bb, double) {
                                for (const auto& [name, m] : bb.mats) {
                                  if (operator_norm(m) >= 1.0) return false;
                                }
                                return true;
                              }});
  }
  for (const Hypothesis& h : hyps) {
    bool ok = false;
    try {
      ok = h.holds(b, tol);
    } catch (const Error& e) {
      throw TermEvalError("chain '" + spec.id + "' hypothesis '" + h.name + "': " + e.what());
    }
    if (!ok) {
      report.verdict = Verdict::hypothesis_not_met;
      report.unmet_hypothesis = h.name;
      return report;
    }
  }

  EvalLog log;
  std::vector<TermValue> values;
  values.reserve(spec.terms.size());
  for (const Term& t : spec.terms) {
    try {
      values.push_back(evaluate_term(t, b, &log));
    } catch (const TermEvalError& e) {
      throw TermEvalError("chain '" + spec.id + "': " + e.what());
    }
  }

  for (size_t i = 0; i + 1 < values.size(); ++i) {
    report.links.push_back(make_link(spec.relation, spec.terms[i].label, values[i],
                                     spec.terms[i + 1].label, values[i + 1], tol));
  }
  if (spec.relation != Relation::equality && values.size() >= 3) {
    LinkResult trans = make_link(spec.relation, spec.terms.front().label, values.front(),
                                 spec.terms.back().label, values.back(), tol);
    trans.transitivity = true;
    report.links.push_back(trans);
  }
  if (spec.info_link) {
    try {
      TermValue extra = evaluate_term(spec.info_link->rhs, b, &log);
      LinkResult info = make_link(spec.relation, spec.terms[spec.info_link->lhs_index].label,
                                  values[spec.info_link->lhs_index], spec.info_link->rhs.label,
                                  extra, tol);
      info.informational = true;
      report.links.push_back(info);
    } catch (const TermEvalError& e) {
      throw TermEvalError("chain '" + spec.id + "': " + e.what());
    }
  }

  report.quad_errors = std::move(log.quad_errors);
  report.verdict = Verdict::pass;
  for (const LinkResult& link : report.links) {
    if (!link.informational && !link.pass) {
      report.verdict = Verdict::fail;
      break;
    }
  }
  return report;
}

}  // namespace opgeo
