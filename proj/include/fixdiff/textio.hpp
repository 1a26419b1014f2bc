#ifndef FIXDIFF_TEXTIO_HPP
#define FIXDIFF_TEXTIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "fixdiff/fixpoint.hpp"

namespace fixdiff {

/// Parsed equation file before system construction: header fields plus one
/// polynomial text per unknown.
struct ProblemFile {
    const Semiring* semiring = nullptr;
    std::uint32_t truncate = 0;
    std::vector<std::string> params;
    std::vector<std::string> vars;
    std::vector<std::pair<std::string, std::string>> equations;  // var, text
    std::vector<int> equation_lines;  // source line of each equation
};

/// Line-oriented equation format:
///   semiring nat
///   truncate 9
///   param z
///   var B
///   B = z + z*B^2
/// Comments start with '#'. Tokens: identifiers, number literals, = + * ^.
/// Errors carry line and column.
ProblemFile parse_problem_file(const std::string& text);

EquationSystem parse_system(const std::string& text,
                            const Semiring* semiring_override = nullptr,
                            std::optional<std::uint32_t> degree_override = {});

/// Polynomial expression over a fixed context; the inverse of to_string.
Series parse_series(const std::string& text, const Semiring& sr,
                    const std::vector<std::string>& variables,
                    std::uint32_t degree);

/// Grammar file:
///   S -> a S b | eps
///   weight a 3
/// Terminals are lowercase identifiers, nonterminals uppercase, `eps` is the
/// empty word; the start symbol is the first left-hand side. The translation
/// maps every terminal to (weight * z), alternatives to addition and
/// concatenation to multiplication, giving one unknown per nonterminal over
/// the single length-marking parameter z.
struct GrammarFile {
    std::vector<std::string> nonterminals;  // in order of first definition
    std::vector<std::string> terminals;     // in order of first use
    std::vector<std::pair<std::string, std::vector<std::vector<std::string>>>>
        productions;  // nonterminal -> alternatives -> symbols ("" for eps)
    std::string start;
    std::vector<std::pair<std::string, std::string>> weights;  // terminal, literal
};

GrammarFile parse_grammar_file(const std::string& text);

EquationSystem parse_grammar(const std::string& text, const Semiring& sr,
                             std::uint32_t degree);

/// Deterministic coefficient table, graded-lex rows per unknown:
///   unknown<TAB>monomial<TAB>coefficient
std::string solution_table(const std::vector<std::string>& unknowns,
                           const SeriesTuple& solution);

}  // namespace fixdiff

#endif
