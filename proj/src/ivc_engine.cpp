#include "mivc/ivc_engine.hpp"

#include <sstream>

#include "mivc/mcs_engine.hpp"

namespace mivc {

IvcResult get_approximate_mivc(EngineContext& ctx) {
  VerifyOutcome out = ctx.verify_active(ctx.universe(), /*collect_cores=*/true);
  if (out.safe()) return {out.core, false};
  if (out.unsafe()) throw PropertyNotInvariant(ctx.property().label);
  return {ctx.universe(), true};  // inconclusive: the whole set, flagged
}

IvcResult minimize_ivc(EngineContext& ctx, const ElementIdSet& ivc, const ElementIdSet& must) {
  ElementIdSet current = ivc;
  bool approx = false;
  for (ElementId e : ivc) {  // ascending id order
    if (must.count(e)) continue;
    ElementIdSet candidate = current;
    candidate.erase(e);
    VerifyOutcome out = ctx.verify_active(candidate);
    if (out.safe())
      current = std::move(candidate);
    else if (out.unknown())
      approx = true;  // kept: removal could not be justified
  }
  return {current, approx};
}

MivcEnumeration all_mivcs(EngineContext& ctx) {
  MivcEnumeration result;
  bool approx = false;

  auto [must, must_ap] = must_set(ctx);
  result.must = must;
  result.must_approximate = must_ap;

  ExplorationMap map(ctx.universe(), ctx.solver_config());
  map.require_all(must);

  VerifyOutcome must_check = ctx.verify_active(must);
  if (must_check.safe()) {
    // the MUST set is itself a core: it is the unique minimal one
    result.mivcs.push_back({must, false});
    result.complete = true;
    return result;
  }

  while (map.is_sat()) {
    auto seed_opt = map.get_unexplored_max();
    if (!seed_opt) break;
    const ElementIdSet& seed = *seed_opt;

    VerifyOutcome out = ctx.verify_active(seed);
    if (out.safe()) {
      IvcResult mivc = minimize_ivc(ctx, seed, must);
      result.mivcs.push_back(mivc);
      map.block_supersets(mivc.elements);
      continue;
    }

    // not a core (or unknown, treated as unsafe): prune with a cut set over
    // the complement of the seed
    ElementIdSet complement;
    for (ElementId id : ctx.universe())
      if (!seed.count(id)) complement.insert(id);

    std::optional<McsResult> mcs;
    bool no_cut_exists = false;
    try {
      mcs = get_single_mcs(ctx, complement);
    } catch (const NoCutSetExists&) {
      no_cut_exists = true;
    }

    if (mcs && !mcs->elements.empty()) {
      map.require_intersection(mcs->elements);
    } else {
      // Inconclusive (or the seed's complement holds no cut at all): give up
      // on everything below this seed. Sound when the seed is genuinely
      // unsafe; completeness is surrendered through the approx flag.
      map.require_intersection(complement);
      approx = true;
      (void)no_cut_exists;
    }
    approx = approx || out.unknown();
  }

  result.complete = !approx;
  return result;
}

Categorization categorize(const MivcEnumeration& enumeration, const ElementIdSet& universe) {
  if (!enumeration.complete) throw IncompleteEnumeration();
  for (const auto& m : enumeration.mivcs)
    if (m.approximate) throw IncompleteEnumeration();

  Categorization cat;
  ElementIdSet union_all;
  bool first = true;
  for (const auto& m : enumeration.mivcs) {
    for (ElementId id : m.elements) union_all.insert(id);
    if (first) {
      cat.must = m.elements;
      first = false;
    } else {
      ElementIdSet inter;
      for (ElementId id : cat.must)
        if (m.elements.count(id)) inter.insert(id);
      cat.must = std::move(inter);
    }
  }
  for (ElementId id : union_all)
    if (!cat.must.count(id)) cat.may.insert(id);
  for (ElementId id : universe)
    if (!union_all.count(id)) cat.irr.insert(id);
  return cat;
}

// ---------------------------------------------------------------------------

struct ExplorationMap::Impl {
  Impl(const ElementIdSet& universe, SolverConfig cfg)
      : universe(universe), session(std::move(cfg)) {
    for (ElementId id : universe) session.declare_const(sel(id), "Bool");
  }

  static std::string sel(ElementId id) { return activation_var_name(id); }

  std::string alk_lit(int k) {
    if (!alk_declared.count(k)) {
      std::string name = "alk!" + std::to_string(k);
      std::ostringstream sum;
      sum << "(+ 0";
      for (ElementId id : universe) sum << " (ite " << sel(id) << " 1 0)";
      sum << ")";
      session.declare_const(name, "Bool");
      session.assert_raw("(=> " + name + " (>= " + sum.str() + " " + std::to_string(k) + "))");
      alk_declared.insert(k);
    }
    return "alk!" + std::to_string(k);
  }

  ElementIdSet universe;
  Session session;
  std::set<int> alk_declared;
};

ExplorationMap::ExplorationMap(const ElementIdSet& universe, SolverConfig cfg)
    : impl_(std::make_unique<Impl>(universe, std::move(cfg))) {}

ExplorationMap::~ExplorationMap() = default;

void ExplorationMap::require_all(const ElementIdSet& ids) {
  for (ElementId id : ids) impl_->session.assert_raw(Impl::sel(id));
}

void ExplorationMap::block_supersets(const ElementIdSet& ids) {
  std::ostringstream clause;
  clause << "(or false";
  for (ElementId id : ids) clause << " (not " << Impl::sel(id) << ")";
  clause << ")";
  impl_->session.assert_raw(clause.str());
}

void ExplorationMap::require_intersection(const ElementIdSet& ids) {
  std::ostringstream clause;
  clause << "(or false";
  for (ElementId id : ids) clause << " " << Impl::sel(id);
  clause << ")";
  impl_->session.assert_raw(clause.str());
}

bool ExplorationMap::is_sat() {
  SatResult r = impl_->session.check_assuming({});
  if (r.is_unknown()) throw ProtocolError("exploration map query returned unknown");
  return r.is_sat();
}

std::optional<ElementIdSet> ExplorationMap::get_unexplored_max() {
  if (!is_sat()) return std::nullopt;
  const int n = static_cast<int>(impl_->universe.size());
  auto feasible = [&](int k) {
    SatResult r = impl_->session.check_assuming({{impl_->alk_lit(k), true}});
    if (r.is_unknown()) throw ProtocolError("exploration map query returned unknown");
    return r.is_sat();
  };
  int lo = 0;
  int hi = n;
  while (lo < hi) {
    int mid = lo + (hi - lo + 1) / 2;
    if (feasible(mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  std::vector<std::string> symbols;
  for (ElementId id : impl_->universe) symbols.push_back(Impl::sel(id));
  SatResult r = impl_->session.check_assuming({{impl_->alk_lit(lo), true}}, symbols);
  if (!r.is_sat()) throw ProtocolError("exploration map lost a model between queries");
  ElementIdSet seed;
  for (ElementId id : impl_->universe) {
    auto it = r.model.find(Impl::sel(id));
    if (it != r.model.end() && std::holds_alternative<bool>(it->second) &&
        std::get<bool>(it->second))
      seed.insert(id);
  }
  return seed;
}

}  // namespace mivc
