#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ggroup/engine.hpp"

namespace ggroup::trace {

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Line-oriented rendering:
///
///     start: s(j,l)
///     expand path=0 rule=gen:6 delta={A_1=j,B_1=l}
///     move path=2 block=3
///     end: john saw louise
std::string to_text(const engine::Derivation& d);
engine::Derivation from_text(std::string_view text, const std::set<std::string>& phon_vocab);

/// Structured rendering of the same fields.
std::string to_json(const engine::Derivation& d);
engine::Derivation from_json(std::string_view text, const std::set<std::string>& phon_vocab);

/// `{A_1=j,P_2=\#_.s(#_,#x2)}` and back.
term::Binding parse_binding(std::string_view text);

}  // namespace ggroup::trace
