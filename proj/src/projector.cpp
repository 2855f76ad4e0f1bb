#include "shellproj/projector.hpp"

namespace shellproj {

std::string to_string(Cutoff::Kind kind) {
  switch (kind) {
    case Cutoff::Kind::indicator:
      return "indicator";
    case Cutoff::Kind::smooth_bump:
      return "smooth_bump";
    case Cutoff::Kind::truncated_gaussian:
      return "truncated_gaussian";
  }
  return "?";
}

Cutoff::Kind cutoff_kind_from_string(const std::string& name) {
  if (name == "indicator") return Cutoff::Kind::indicator;
  if (name == "smooth_bump") return Cutoff::Kind::smooth_bump;
  if (name == "truncated_gaussian") return Cutoff::Kind::truncated_gaussian;
  throw PreconditionError("unknown cutoff kind '" + name + "'");
}

std::string to_string(Regime r) { return r == Regime::low ? "low" : "high"; }

}  // namespace shellproj
