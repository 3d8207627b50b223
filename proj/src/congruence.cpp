#include "wdl/congruence.hpp"

#include <json.hpp>

#include <algorithm>

#include "wdl/error.hpp"

namespace wdl {

namespace {

constexpr unsigned kMaxStabilizationDegree = 256;

IntVector hadamard(std::span<const Integer> a, std::span<const Integer> b) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

std::size_t q_rank(const IntMatrix& m, std::uint64_t p) {
  return local_echelon(m, p, m.cols()).pivot_columns.size();
}

// [A_0 - c_0 I | A_1 - c_1 I | ...]
IntMatrix eigen_system(const std::vector<IntMatrix>& actions, const std::vector<Integer>& values,
                       std::size_t n) {
  IntMatrix out(n, n * actions.size());
  for (std::size_t g = 0; g < actions.size(); ++g) {
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        out(r, g * n + c) = actions[g](r, c);
        if (r == c) out(r, g * n + c) -= values[g];
      }
  }
  return out;
}

std::vector<Integer> generator_values(const OAlgebra& r, std::size_t i) {
  if (i >= r.num_augmentations()) {
    fail(ErrorCode::InvalidArgument, "augmentation index " + std::to_string(i) + " out of range (r = " +
                                         std::to_string(r.num_augmentations()) + ")");
  }
  std::vector<Integer> out;
  out.reserve(r.generators().size());
  for (const auto& g : r.generators()) out.push_back(g[i]);
  return out;
}

Integer json_integer(const nlohmann::json& j, const char* what) {
  if (j.is_number_integer()) return Integer(j.dump());
  if (j.is_string()) {
    Integer out;
    const std::string s = j.get<std::string>();
    if (s.empty() || out.set_str(s, 10) != 0) fail(ErrorCode::Parse, std::string(what) + ": bad integer \"" + s + "\"");
    return out;
  }
  fail(ErrorCode::Parse, std::string(what) + ": expected an integer");
}

std::size_t json_size(const nlohmann::json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    fail(ErrorCode::Parse, std::string(what) + ": expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(ErrorCode::Parse, "expected a JSON object");
  for (const auto& item : j.items()) {
    bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
    if (!ok) fail(ErrorCode::Parse, "unknown field \"" + item.key() + "\"");
  }
  for (const char* k : allowed) {
    if (!j.contains(k)) fail(ErrorCode::Parse, std::string("missing field \"") + k + "\"");
  }
}

nlohmann::json parse_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::Parse, e.what());
  }
}

}  // namespace

OAlgebra::OAlgebra(std::uint64_t p, std::size_t r, std::vector<IntVector> generators)
    : p_(p), r_(r), gens_(std::move(generators)) {
  if (!is_prime(p_)) fail(ErrorCode::NotPrime, "algebra prime " + std::to_string(p_) + " is not prime");
  if (r_ == 0) fail(ErrorCode::InvalidArgument, "algebra needs at least one augmentation");
  const Integer pp(static_cast<unsigned long>(p_));
  for (std::size_t g = 0; g < gens_.size(); ++g) {
    if (gens_[g].size() != r_) {
      fail(ErrorCode::InvalidArgument, "generator " + std::to_string(g) + " has " + std::to_string(gens_[g].size()) +
                                           " coordinates, expected " + std::to_string(r_));
    }
    for (std::size_t i = 1; i < r_; ++i) {
      if (!mpz_congruent_p(gens_[g][i].get_mpz_t(), gens_[g][0].get_mpz_t(), pp.get_mpz_t())) {
        fail(ErrorCode::Inadmissible, "generator " + std::to_string(g) + " is not constant mod p (not local)");
      }
    }
  }
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = i + 1; j < r_; ++j) {
      bool separated = std::any_of(gens_.begin(), gens_.end(), [&](const IntVector& g) { return g[i] != g[j]; });
      if (!separated) {
        fail(ErrorCode::Inadmissible, "augmentations " + std::to_string(i) + " and " + std::to_string(j) +
                                          " are not separated by any generator");
      }
    }

  IntMatrix span(0, r_);
  span.append_row(IntVector(r_, Integer(1)));
  for (const auto& g : gens_) span.append_row(g);
  IntMatrix current = hermite_basis(span);
  for (degree_ = 1; degree_ <= kMaxStabilizationDegree; ++degree_) {
    IntMatrix next = current;
    for (const auto& g : gens_)
      for (std::size_t k = 0; k < current.rows(); ++k) next.append_row(hadamard(current.row(k), g));
    next = hermite_basis(next);
    if (next == current) break;
    current = std::move(next);
  }
  if (degree_ > kMaxStabilizationDegree) fail(ErrorCode::Inadmissible, "monomial span did not stabilize");
  basis_ = std::move(current);
  if (basis_.rows() != r_) fail(ErrorCode::Internal, "algebra basis has unexpected rank");
}

bool OAlgebra::contains(const IntVector& x) const {
  // Membership in the Z_(p)-span: solve over Q, check denominators.
  PLattice l(p_, r_, basis_);
  PLattice v(p_, r_, IntMatrix::from_rows({x}, r_));
  return wdl::contains(v, l);
}

IntMatrix OAlgebra::multiplication_matrix(const IntVector& x) const {
  IntMatrix out(r_, r_);
  for (std::size_t k = 0; k < r_; ++k) {
    auto coords = integer_coordinates(basis_, hadamard(basis_.row(k), x));
    for (std::size_t j = 0; j < r_; ++j) out(k, j) = coords[j];
  }
  return out;
}

RModule::RModule(OAlgebra algebra, std::size_t rank, std::vector<IntMatrix> actions)
    : algebra_(std::move(algebra)), rank_(rank), actions_(std::move(actions)) {
  const auto& gens = algebra_.generators();
  if (rank_ == 0) fail(ErrorCode::InvalidArgument, "module rank must be positive");
  if (actions_.size() != gens.size()) {
    fail(ErrorCode::InvalidArgument, "expected " + std::to_string(gens.size()) + " action matrices, got " +
                                         std::to_string(actions_.size()));
  }
  for (std::size_t g = 0; g < actions_.size(); ++g) {
    if (actions_[g].rows() != rank_ || actions_[g].cols() != rank_) {
      fail(ErrorCode::InvalidArgument, "action matrix " + std::to_string(g) + " is not " + std::to_string(rank_) +
                                           "x" + std::to_string(rank_));
    }
  }
  for (std::size_t a = 0; a < actions_.size(); ++a)
    for (std::size_t b = a + 1; b < actions_.size(); ++b) {
      if (actions_[a] * actions_[b] != actions_[b] * actions_[a]) {
        fail(ErrorCode::InvalidArgument, "action matrices " + std::to_string(a) + " and " + std::to_string(b) +
                                             " do not commute");
      }
    }

  // Every linear relation among the generator monomials of degree up to one
  // past stabilization must also hold for the action matrices.
  const std::size_t r = algebra_.num_augmentations();
  const std::size_t n2 = rank_ * rank_;
  const unsigned top = algebra_.stabilization_degree() + 1;
  struct Monomial {
    IntVector value;
    IntMatrix action;
    std::size_t last;
  };
  std::vector<Monomial> layer{{IntVector(r, Integer(1)), IntMatrix::identity(rank_), 0}};
  IntMatrix joint(0, r + n2);
  auto add_row = [&](const Monomial& m) {
    IntVector row(m.value);
    for (std::size_t a = 0; a < rank_; ++a)
      for (std::size_t b = 0; b < rank_; ++b) row.push_back(m.action(a, b));
    joint.append_row(row);
  };
  add_row(layer.front());
  for (unsigned d = 1; d <= top && !gens.empty(); ++d) {
    std::vector<Monomial> next;
    for (const auto& m : layer)
      for (std::size_t g = m.last; g < gens.size(); ++g) {
        next.push_back({hadamard(m.value, gens[g]), m.action * actions_[g], g});
        add_row(next.back());
      }
    layer = std::move(next);
  }
  if (q_rank(joint, algebra_.prime()) != q_rank(joint.columns(0, r), algebra_.prime())) {
    fail(ErrorCode::InvalidArgument, "action matrices violate a relation among the algebra generators");
  }
}

std::size_t RModule::lambda_rank(std::size_t i) const { return eigen_lattice(*this, i).rank(); }

RModule regular_module(const OAlgebra& r) {
  std::vector<IntMatrix> actions;
  for (const auto& g : r.generators()) actions.push_back(r.multiplication_matrix(g));
  return RModule(r, r.num_augmentations(), std::move(actions));
}

RModule dual_module(const RModule& m) {
  std::vector<IntMatrix> actions;
  for (const auto& a : m.actions()) actions.push_back(a.transpose());
  return RModule(m.algebra(), m.rank(), std::move(actions));
}

RModule direct_sum(const RModule& a, const RModule& b) {
  if (a.algebra().basis() != b.algebra().basis() || a.algebra().generators() != b.algebra().generators()) {
    fail(ErrorCode::InvalidArgument, "direct sum of modules over different algebras");
  }
  const std::size_t n = a.rank() + b.rank();
  std::vector<IntMatrix> actions;
  for (std::size_t g = 0; g < a.actions().size(); ++g) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < a.rank(); ++i)
      for (std::size_t j = 0; j < a.rank(); ++j) m(i, j) = a.actions()[g](i, j);
    for (std::size_t i = 0; i < b.rank(); ++i)
      for (std::size_t j = 0; j < b.rank(); ++j) m(a.rank() + i, a.rank() + j) = b.actions()[g](i, j);
    actions.push_back(std::move(m));
  }
  return RModule(a.algebra(), n, std::move(actions));
}

RModule submodule_of_normalization(const OAlgebra& r, const std::vector<IntVector>& vectors) {
  const std::size_t n = r.num_augmentations();
  IntMatrix span(0, n);
  for (const auto& v : vectors) {
    if (v.size() != n) fail(ErrorCode::InvalidArgument, "vector length does not match the algebra");
    for (std::size_t k = 0; k < r.basis().rows(); ++k) span.append_row(hadamard(r.basis().row(k), v));
  }
  IntMatrix l = hermite_basis(span);
  if (l.rows() == 0) fail(ErrorCode::InvalidArgument, "generated submodule is zero");
  std::vector<IntMatrix> actions;
  for (const auto& g : r.generators()) {
    IntMatrix a(l.rows(), l.rows());
    for (std::size_t k = 0; k < l.rows(); ++k) {
      auto coords = integer_coordinates(l, hadamard(l.row(k), g));
      for (std::size_t j = 0; j < l.rows(); ++j) a(k, j) = coords[j];
    }
    actions.push_back(std::move(a));
  }
  return RModule(r, l.rows(), std::move(actions));
}

PLattice eigen_lattice(const RModule& m, std::size_t i) {
  const auto values = generator_values(m.algebra(), i);
  return kernel(eigen_system(m.actions(), values, m.rank()), m.algebra().prime());
}

PLattice augmentation_ideal(const OAlgebra& r, std::size_t i) {
  generator_values(r, i);
  const PLattice coeffs = kernel(r.basis().columns(i, 1), r.prime());
  return PLattice(r.prime(), r.num_augmentations(), coeffs.basis() * r.basis());
}

PAdicVal cotangent_length(const OAlgebra& r, std::size_t i) {
  const PLattice k = augmentation_ideal(r, i);
  IntMatrix squares(0, r.num_augmentations());
  for (std::size_t a = 0; a < k.rank(); ++a)
    for (std::size_t b = a; b < k.rank(); ++b) squares.append_row(hadamard(k.basis().row(a), k.basis().row(b)));
  return quotient_length(PLattice(r.prime(), r.num_augmentations(), std::move(squares)), k);
}

IntVector annihilator_generator(const OAlgebra& r, std::size_t i) {
  const PLattice k = augmentation_ideal(r, i);
  const std::size_t n = r.num_augmentations();
  // Coefficient vectors c with (c * B) o k_j = 0 for every kernel generator.
  IntMatrix system(n, n * k.rank());
  for (std::size_t j = 0; j < k.rank(); ++j)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t c = 0; c < n; ++c) system(a, j * n + c) = r.basis()(a, c) * k.basis()(j, c);
  const PLattice ann = kernel(system, r.prime());
  if (ann.rank() != 1) {
    fail(ErrorCode::Precondition, "lambda-rank of R not 1 at augmentation " + std::to_string(i));
  }
  IntMatrix alpha = ann.basis() * r.basis();
  return IntVector(alpha.row(0).begin(), alpha.row(0).end());
}

PAdicVal algebra_congruence_length(const OAlgebra& r, std::size_t i) {
  return vp(r.prime(), annihilator_generator(r, i)[i]);
}

CongruenceModuleInfo module_congruence(const RModule& m, std::size_t i) {
  const PLattice x = eigen_lattice(m, i);
  const PLattice f = eigen_lattice(dual_module(m), i);
  const std::size_t d = x.rank();
  if (d == 0) fail(ErrorCode::Precondition, "lambda-rank zero at augmentation " + std::to_string(i));
  if (f.rank() != d) fail(ErrorCode::Internal, "eigenspaces of M and its dual have different ranks");
  const Integer det = determinant(f.basis() * x.basis().transpose());
  if (det == 0) {
    fail(ErrorCode::InvalidArgument, "pairing on eigenspaces is degenerate; module data is invalid");
  }
  return {vp(m.algebra().prime(), det), d};
}

PAdicVal module_congruence_length(const RModule& m, std::size_t i) { return module_congruence(m, i).length; }

DefectReport wiles_defect(const OAlgebra& r, const RModule& m, std::size_t i) {
  DefectReport rep;
  rep.phi_length = cotangent_length(r, i);
  const CongruenceModuleInfo psi = module_congruence(m, i);
  rep.psi_length = psi.length;
  rep.lambda_rank = psi.lambda_rank;
  const Integer d(static_cast<unsigned long>(psi.lambda_rank));
  const Integer phi(static_cast<unsigned long>(rep.phi_length.value()));
  const Integer len(static_cast<unsigned long>(rep.psi_length.value()));
  rep.defect = Rational(d * phi - len, d);
  rep.defect.canonicalize();
  for (std::size_t j = 0; j < r.num_augmentations(); ++j) {
    if (j != i && m.lambda_rank(j) > psi.lambda_rank) rep.generic_rank_exceeds_lambda_rank = true;
  }
  return rep;
}

DefectReport wiles_defect(const OAlgebra& r, std::size_t i) { return wiles_defect(r, regular_module(r), i); }

OAlgebra build_remark_subalgebra(const OAlgebra& rtilde) {
  std::vector<IntVector> alphas;
  for (std::size_t i = 0; i < rtilde.num_augmentations(); ++i) alphas.push_back(annihilator_generator(rtilde, i));
  return OAlgebra(rtilde.prime(), rtilde.num_augmentations(), std::move(alphas));
}

OAlgebra algebra_from_json(const std::string& text) {
  const auto j = parse_json(text);
  reject_unknown(j, {"p", "r", "generators"});
  const std::size_t p = json_size(j["p"], "p");
  const std::size_t r = json_size(j["r"], "r");
  if (!j["generators"].is_array()) fail(ErrorCode::Parse, "generators: expected an array");
  std::vector<IntVector> gens;
  for (const auto& g : j["generators"]) {
    if (!g.is_array()) fail(ErrorCode::Parse, "generators: expected arrays of integers");
    IntVector v;
    for (const auto& x : g) v.push_back(json_integer(x, "generator entry"));
    gens.push_back(std::move(v));
  }
  return OAlgebra(p, r, std::move(gens));
}

RModule module_from_json(const OAlgebra& r, const std::string& text) {
  const auto j = parse_json(text);
  reject_unknown(j, {"rank", "actions"});
  const std::size_t n = json_size(j["rank"], "rank");
  if (!j["actions"].is_array()) fail(ErrorCode::Parse, "actions: expected an array");
  std::vector<IntMatrix> actions;
  for (const auto& a : j["actions"]) {
    if (!a.is_array()) fail(ErrorCode::Parse, "actions: expected matrices");
    IntMatrix m(0, n);
    for (const auto& row : a) {
      if (!row.is_array()) fail(ErrorCode::Parse, "actions: expected matrix rows");
      IntVector v;
      for (const auto& x : row) v.push_back(json_integer(x, "action entry"));
      if (v.size() != n) fail(ErrorCode::Parse, "action row length does not match rank");
      m.append_row(v);
    }
    actions.push_back(std::move(m));
  }
  return RModule(r, n, std::move(actions));
}

}  // namespace wdl
