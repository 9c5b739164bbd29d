#pragma once

// Fault injection for the law harness: an algebra with one operation table
// entry overwritten, and square roots perturbed at one point or replaced by
// a wrong rule.

#include "emvkit/laws.hpp"

#include <string>
#include <vector>

namespace emv {

enum class MutatedOp { oplus, join, meet, complement_in };

inline std::string mutated_op_name(MutatedOp op) {
  switch (op) {
    case MutatedOp::oplus: return "(+)";
    case MutatedOp::join: return "v";
    case MutatedOp::meet: return "^";
    case MutatedOp::complement_in: return "lambda";
  }
  return "?";
}

/// Delegates everything to the base algebra except op(x, y), which returns
/// the replacement value.  The product is recomputed from the mutated
/// operations instead of the base algebra's shortcut.
class MutatedAlgebra : public Algebra {
 public:
  MutatedAlgebra(AlgebraPtr base, MutatedOp op, Element x, Element y, Element value)
      : base_(std::move(base)), op_(op), x_(std::move(x)), y_(std::move(y)), value_(std::move(value)) {}

  AlgebraKind kind() const override { return AlgebraKind::wrapped; }
  std::string name() const override { return base_->name(); }
  bool has_top() const override { return base_->has_top(); }
  Element top() const override { return base_->top(); }
  Element zero() const override { return base_->zero(); }
  bool contains(const Element& x) const override { return base_->contains(x); }

  bool leq(const Element& x, const Element& y) const override { return meet(x, y) == x; }
  Element join(const Element& x, const Element& y) const override { return hit(MutatedOp::join, x, y) ? value_ : base_->join(x, y); }
  Element meet(const Element& x, const Element& y) const override { return hit(MutatedOp::meet, x, y) ? value_ : base_->meet(x, y); }
  Element oplus(const Element& x, const Element& y) const override { return hit(MutatedOp::oplus, x, y) ? value_ : base_->oplus(x, y); }
  Element complement_in(const Element& a, const Element& x) const override {
    return hit(MutatedOp::complement_in, a, x) ? value_ : base_->complement_in(a, x);
  }
  Element cover(const Element& x) const override { return base_->cover(x); }
  std::optional<Element> half_sum(const Element& x, const Element& y) const override { return base_->half_sum(x, y); }
  Division divide(const Element& x, unsigned n) const override {
    Division d = base_->divide(x, n);
    if (d.status == Division::Status::found) d.status = Division::Status::unknown;
    return d;
  }

  bool totally_ordered() const override { return base_->totally_ordered(); }
  bool generalized_boolean() const override { return base_->generalized_boolean(); }
  bool finite() const override { return base_->finite(); }
  Enumeration enumerate(const Budget& budget) const override { return base_->enumerate(budget); }
  std::vector<Element> idempotents(const Budget& budget) const override { return base_->idempotents(budget); }
  std::string format(const Element& x) const override { return base_->format(x); }
  Element from_literal(const Literal& lit) const override { return base_->from_literal(lit); }

  std::string describe() const {
    return mutated_op_name(op_) + "(" + format(x_) + ", " + format(y_) + ") := " + format(value_);
  }

 private:
  bool hit(MutatedOp op, const Element& x, const Element& y) const { return op == op_ && x == x_ && y == y_; }

  AlgebraPtr base_;
  MutatedOp op_;
  Element x_, y_, value_;
};

/// r with the value at x replaced.
inline RootFn perturb_root(RootFn r, Element x, Element value) {
  return [r = std::move(r), x = std::move(x), value = std::move(value)](const Element& t) { return t == x ? value : r(t); };
}

struct Fault {
  std::string label;
  AlgebraPtr algebra;
  std::optional<RootFn> root;
};

/// Twenty injected faults: ten operation table entries, ten square-root
/// perturbations.
inline std::vector<Fault> standard_faults() {
  std::vector<Fault> out;
  auto elem = [](const AlgebraPtr& m, std::string_view text) { return m->parse_element(text); };
  auto table = [&](std::string_view desc, MutatedOp op, std::string_view x, std::string_view y, std::string_view v) {
    AlgebraPtr base = make_algebra(desc);
    auto mut = std::make_shared<MutatedAlgebra>(base, op, elem(base, x), elem(base, y), elem(base, v));
    std::optional<RootFn> root;
    if (auto b = sqrt_build(*base); b.exists) root = root_function(base, *b.root);
    out.push_back({std::string(desc) + ": " + mut->describe(), mut, root});
  };
  table("bool(2)", MutatedOp::oplus, "(1,0)", "(0,1)", "(1,0)");
  table("bool(2)", MutatedOp::oplus, "(1,1)", "(1,1)", "(1,0)");
  table("bool(2)", MutatedOp::join, "(1,0)", "(0,1)", "(1,0)");
  table("bool(2)", MutatedOp::meet, "(1,1)", "(0,1)", "(0,0)");
  table("bool(2)", MutatedOp::complement_in, "(1,1)", "(1,0)", "(1,0)");
  table("chain(3)", MutatedOp::oplus, "1/3", "1/3", "1");
  table("chain(3)", MutatedOp::meet, "1/3", "2/3", "2/3");
  table("chain(3)", MutatedOp::complement_in, "1", "2/3", "2/3");
  table("chain(4)", MutatedOp::oplus, "1/4", "1/2", "1/2");
  table("product(chain(1),chain(2))", MutatedOp::join, "(1,0)", "(0,1/2)", "(1,0)");

  auto point = [&](std::string_view desc, std::string_view x, std::string_view v) {
    AlgebraPtr m = make_algebra(desc);
    const auto b = sqrt_build(*m);
    out.push_back({std::string(desc) + ": r(" + std::string(x) + ") := " + std::string(v), m,
                   perturb_root(root_function(m, *b.root), elem(m, x), elem(m, v))});
  };
  point("bool(3)", "(1,0,0)", "(1,1,0)");
  point("bool(2)", "(0,0)", "(1,0)");
  point("dyadic", "1/2", "1/2");
  point("dyadic", "0", "1/4");
  point("rational", "1/3", "1/2");
  point("product(bool(1),dyadic)", "(1,1/4)", "(1,1/2)");
  point("product(bool(1),dyadic)", "(0,0)", "(1,1/2)");
  point("finsubsets", "{1}", "{1,2}");

  {
    AlgebraPtr m = make_algebra("dyadic");
    const Element half = elem(m, "1/2");
    out.push_back({"dyadic: r(x) := x v 1/2", m, RootFn([m, half](const Element& x) { return m->join(x, half); })});
  }
  {
    AlgebraPtr m = make_algebra("chain(4)");
    out.push_back({"chain(4): r := identity", m, RootFn([](const Element& x) { return x; })});
  }
  return out;
}

struct MutationOutcome {
  std::string label;
  std::size_t failed_suites = 0;
  std::string first_failure;
};

inline std::vector<MutationOutcome> mutation_self_test(const Budget& budget = {}, std::uint64_t seed = 0) {
  std::vector<MutationOutcome> out;
  for (const auto& f : standard_faults()) {
    const LawContext ctx = make_context(f.algebra, f.root, budget, seed);
    MutationOutcome o{f.label, 0, {}};
    for (const auto& r : run_catalog(ctx)) {
      if (r.verdict != LawReport::Verdict::fail) continue;
      if (o.failed_suites++ == 0) o.first_failure = r.suite + " at " + r.witness_text;
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace emv
