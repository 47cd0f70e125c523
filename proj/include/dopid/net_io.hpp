#pragma once

#include "dopid/json_values.hpp"
#include "dopid/net.hpp"

namespace dopid {

// Throws DocumentError with a path into the document.
Net load_model(const Json& doc);
Net load_model_text(const std::string& text);
Net load_model_file(const std::string& path);

// Canonical document form; load_model(serialize(n)) reproduces n.
Json serialize(const Net& net);

Json marking_spec_to_json(const Net& net, const MarkingSpec& spec);

struct Violation {
  std::string where;
  std::string message;
};

// Every violated well-formedness rule; empty iff the net is well-formed.
std::vector<Violation> validate_net(const Net& net);

// Silent transitions without nu outputs that lie on a cycle of the
// silent-transition graph (t -> t' when t's postset meets t''s preset).
std::vector<std::vector<size_t>> silent_cycles(const Net& net);

}  // namespace dopid
