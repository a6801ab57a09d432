#include <algorithm>
#include <cctype>

#include "mrmt/errors.hpp"
#include "mrmt/surmise.hpp"

namespace mrmt::surmise {

TransitionKind::TransitionKind(Tag tag) : tag_(tag) {
  if (tag == Tag::Pure) throw DomainError("a pure kind needs a Dyson index; use TransitionKind::pure");
}

TransitionKind TransitionKind::pure(int beta) {
  if (beta != 0 && beta != 1 && beta != 2 && beta != 4)
    throw DomainError("pure kinds exist only for beta in {0, 1, 2, 4}, got " + std::to_string(beta));
  return TransitionKind(Tag::Pure, beta);
}

int TransitionKind::beta() const {
  if (!is_pure()) throw DomainError(name() + " is not a pure kind");
  return beta_;
}

bool TransitionKind::is_poisson_base() const noexcept {
  return tag_ == Tag::PoissonToGOE || tag_ == Tag::PoissonToGUE || tag_ == Tag::PoissonToGSE;
}

int TransitionKind::perturbation_beta() const {
  switch (tag_) {
    case Tag::Pure: return beta_;
    case Tag::PoissonToGOE: return 1;
    case Tag::PoissonToGUE:
    case Tag::GOEToGUE:
    case Tag::GSEToGUE_S1:
    case Tag::GSEToGUE_S2: return 2;
    case Tag::PoissonToGSE:
    case Tag::GOEToGSE:
    case Tag::GUEToGSE: return 4;
  }
  return -1;
}

TransitionKind TransitionKind::zero_limit() const {
  switch (tag_) {
    case Tag::Pure: return *this;
    case Tag::PoissonToGOE:
    case Tag::PoissonToGUE:
    case Tag::PoissonToGSE: return pure(0);
    case Tag::GOEToGUE:
    case Tag::GOEToGSE: return pure(1);
    case Tag::GUEToGSE:
    case Tag::GSEToGUE_S1: return pure(2);
    case Tag::GSEToGUE_S2: return pure(4);
  }
  return pure(0);
}

std::string TransitionKind::name() const {
  switch (tag_) {
    case Tag::Pure: return "Pure" + std::to_string(beta_);
    case Tag::PoissonToGOE: return "PoissonToGOE";
    case Tag::PoissonToGUE: return "PoissonToGUE";
    case Tag::PoissonToGSE: return "PoissonToGSE";
    case Tag::GOEToGUE: return "GOEToGUE";
    case Tag::GOEToGSE: return "GOEToGSE";
    case Tag::GUEToGSE: return "GUEToGSE";
    case Tag::GSEToGUE_S1: return "GSEToGUE_S1";
    case Tag::GSEToGUE_S2: return "GSEToGUE_S2";
  }
  return "?";
}

TransitionKind TransitionKind::parse(std::string_view text) {
  std::string key;
  for (char c : text)
    if (c != '_' && c != '-' && c != ' ') key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (key.rfind("pure", 0) == 0 && key.size() == 5 && std::isdigit(static_cast<unsigned char>(key[4])))
    return pure(key[4] - '0');
  if (key == "poisson") return pure(0);
  if (key == "goe") return pure(1);
  if (key == "gue") return pure(2);
  if (key == "gse") return pure(4);
  for (const auto& k : mixed()) {
    std::string candidate;
    for (char c : k.name())
      if (c != '_') candidate.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (candidate == key) return k;
  }
  throw DomainError("unknown transition kind '" + std::string(text) + "'");
}

const std::array<TransitionKind, 6>& TransitionKind::transitions() {
  static const std::array<TransitionKind, 6> kinds{Tag::PoissonToGOE, Tag::PoissonToGUE, Tag::PoissonToGSE,
                                                   Tag::GOEToGUE,     Tag::GOEToGSE,     Tag::GUEToGSE};
  return kinds;
}

const std::array<TransitionKind, 8>& TransitionKind::mixed() {
  static const std::array<TransitionKind, 8> kinds{Tag::PoissonToGOE, Tag::PoissonToGUE, Tag::PoissonToGSE,
                                                   Tag::GOEToGUE,     Tag::GOEToGSE,     Tag::GUEToGSE,
                                                   Tag::GSEToGUE_S1,  Tag::GSEToGUE_S2};
  return kinds;
}

}  // namespace mrmt::surmise
