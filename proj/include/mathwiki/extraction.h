// Maps one page's content onto the triples it contributes to the graph.
#pragma once

#include <set>
#include <string>
#include <variant>

#include "mathwiki/model.h"
#include "mathwiki/triple.h"

namespace mathwiki {

// A page holds exactly one theory (without statements) or one statement.
using PageContent = std::variant<Theory, Statement>;

// Formula node ids are "<page>#f<k>", k counting formulae in pre-order over
// the statement and its proof steps. Proof steps become "<page>#<step-id>".
std::string formula_node_id(const std::string& page, std::size_t k);
std::string step_node_id(const std::string& page, const std::string& step_id);

std::set<Triple> extract(const std::string& page_name, const PageContent& content);

}  // namespace mathwiki
