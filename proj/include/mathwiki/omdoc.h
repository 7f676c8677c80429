// OMDoc-subset XML and the ASCII formula notation.
//
// Element set:
//   <omdoc>                  theory*
//   <theory xml:id>          metadata?, imports*, statements*
//   <imports from/>
//   <metadata>               dc-title?, dc-creator?, dc-description?, dc-date?
//   <symbol id>              CMP*
//   <definition id for>      CMP*, FMP?
//   <axiom id>, <assertion id>, <example id [for]>   CMP*, FMP?
//   <proof id for>           CMP*, FMP?, steps*
//   <notation [id] for="th#name" fixity operator precedence/>
//   <CMP>                    text and <link to>label</link>
//   <FMP>                    one of OMS | OMV | OMI | OMA
//
// ASCII notation:
//   formula := atom call*        call := "(" formula ("," formula)* ")"
//   atom    := ident "#" ident | "$" ident | ["-"] digit+
#pragma once

#include <string>
#include <string_view>

#include "mathwiki/model.h"
#include "mathwiki/result.h"
#include "mathwiki/xml.h"

namespace mathwiki {

enum class ParseErrorCode { Malformed, UnknownElement, MissingAttr, BadRef, BadInteger };

std::string_view parse_error_code_name(ParseErrorCode c);

struct ParseError {
  int line = 1;
  int column = 1;
  ParseErrorCode code = ParseErrorCode::Malformed;
  std::string message;

  std::string to_string() const;
};

Result<Document, ParseError> parse_document(std::string_view xml);
std::string serialize_document(const Document& d);

// FMP payload conversion, shared with the layout and page renderers.
Result<FormulaNode, ParseError> formula_from_xml(const xml::Node& node);
void write_formula_xml(xml::Writer& w, const FormulaNode& f);

Result<FormulaNode, ParseError> parse_formula_ascii(std::string_view src);
std::string print_formula_ascii(const FormulaNode& f);

// Notation declarations without an explicit id get "notation-<theory>-<name>".
std::string default_notation_id(const SymbolRef& r);

}  // namespace mathwiki
