#include "fixdiff/textio.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fixdiff {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Token {
    enum Kind { ident, number, punct, end } kind = end;
    std::string text;
    int column = 0;
};

// One line of input as a token stream with column positions.
class LineLexer {
public:
    LineLexer(const std::string& line, int line_no)
        : line_(line), line_no_(line_no) {}

    Token peek() {
        if (!cached_) cached_ = lex();
        return *cached_;
    }

    Token next() {
        Token t = peek();
        cached_.reset();
        return t;
    }

    [[noreturn]] void fail(const Token& t, const std::string& message) const {
        throw ParseError(line_no_, t.column, message);
    }

    int line_no() const { return line_no_; }

private:
    Token lex() {
        while (pos_ < line_.size() &&
               std::isspace(static_cast<unsigned char>(line_[pos_])))
            ++pos_;
        Token t;
        t.column = static_cast<int>(pos_) + 1;
        if (pos_ >= line_.size() || line_[pos_] == '#') {
            t.kind = Token::end;
            return t;
        }
        char c = line_[pos_];
        if (ident_start(c)) {
            std::size_t start = pos_;
            while (pos_ < line_.size() && ident_char(line_[pos_])) ++pos_;
            t.kind = Token::ident;
            t.text = line_.substr(start, pos_ - start);
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && pos_ + 1 < line_.size() &&
             (std::isdigit(static_cast<unsigned char>(line_[pos_ + 1])) ||
              line_.compare(pos_ + 1, 3, "inf") == 0))) {
            std::size_t start = pos_;
            if (c == '-') ++pos_;
            if (line_.compare(pos_, 3, "inf") == 0) {
                pos_ += 3;
            } else {
                while (pos_ < line_.size() &&
                       (std::isdigit(static_cast<unsigned char>(line_[pos_])) ||
                        line_[pos_] == '.'))
                    ++pos_;
            }
            t.kind = Token::number;
            t.text = line_.substr(start, pos_ - start);
            return t;
        }
        if (c == '-' && line_.compare(pos_, 2, "->") == 0) {
            t.kind = Token::punct;
            t.text = "->";
            pos_ += 2;
            return t;
        }
        t.kind = Token::punct;
        t.text = std::string(1, c);
        ++pos_;
        return t;
    }

    const std::string& line_;
    int line_no_;
    std::size_t pos_ = 0;
    std::optional<Token> cached_;
};

std::vector<std::pair<int, std::string>> split_lines(const std::string& text) {
    std::vector<std::pair<int, std::string>> lines;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) lines.emplace_back(++no, line);
    return lines;
}

Value literal_value(LineLexer& lx, const Token& t, const Semiring& sr) {
    try {
        if (t.text.find('.') != std::string::npos)
            return sr.from_decimal(std::stod(t.text));
        if (t.text == "inf" || t.text == "-inf") return sr.parse(t.text);
        return sr.from_integer(std::stoll(t.text));
    } catch (const DomainMismatchError& e) {
        lx.fail(t, e.what());
    } catch (const std::exception&) {
        lx.fail(t, "malformed number literal '" + t.text + "'");
    }
}

// poly := term ('+' term)* ; term := factor ('*' factor)* ;
// factor := number | ident ('^' int)?
Series parse_poly(LineLexer& lx, const Semiring& sr,
                  const std::vector<std::string>& variables, std::uint32_t degree) {
    auto var_index = [&](const std::string& name) -> std::optional<std::size_t> {
        auto it = std::find(variables.begin(), variables.end(), name);
        if (it == variables.end()) return std::nullopt;
        return static_cast<std::size_t>(it - variables.begin());
    };
    Series result(sr, variables, degree);
    bool more_terms = true;
    while (more_terms) {
        Value coeff = sr.one();
        Exponents expo(variables.size(), 0);
        bool more_factors = true;
        while (more_factors) {
            Token t = lx.next();
            if (t.kind == Token::number) {
                coeff = mul(coeff, literal_value(lx, t, sr));
            } else if (t.kind == Token::ident) {
                std::uint32_t power = 1;
                if (lx.peek().kind == Token::punct && lx.peek().text == "^") {
                    lx.next();
                    Token p = lx.next();
                    if (p.kind != Token::number ||
                        p.text.find('.') != std::string::npos || p.text[0] == '-')
                        lx.fail(p, "expected a natural exponent after '^'");
                    try {
                        power = static_cast<std::uint32_t>(std::stoul(p.text));
                    } catch (const std::exception&) {
                        lx.fail(p, "exponent out of range");
                    }
                }
                if (auto idx = var_index(t.text)) {
                    expo[*idx] += power;
                } else if (t.text == "inf" || t.text == "t" || t.text == "f") {
                    Value v = [&]() -> Value {
                        try {
                            return sr.parse(t.text);
                        } catch (const DomainMismatchError& e) {
                            lx.fail(t, e.what());
                        }
                    }();
                    for (std::uint32_t k = 0; k < power; ++k) coeff = mul(coeff, v);
                } else {
                    lx.fail(t, "undeclared identifier '" + t.text + "'");
                }
            } else {
                lx.fail(t, "expected a coefficient or variable");
            }
            Token sep = lx.peek();
            if (sep.kind == Token::punct && sep.text == "*")
                lx.next();
            else
                more_factors = false;
        }
        result.accumulate(expo, coeff);
        Token sep = lx.peek();
        if (sep.kind == Token::punct && sep.text == "+")
            lx.next();
        else
            more_terms = false;
    }
    Token trailing = lx.peek();
    if (trailing.kind != Token::end)
        lx.fail(trailing, "unexpected token '" + trailing.text + "'");
    return result;
}

}  // namespace

ProblemFile parse_problem_file(const std::string& text) {
    ProblemFile pf;
    bool saw_semiring = false, saw_truncate = false;
    for (const auto& [no, raw] : split_lines(text)) {
        LineLexer lx(raw, no);
        Token head = lx.peek();
        if (head.kind == Token::end) continue;
        if (head.kind != Token::ident)
            lx.fail(head, "expected a directive or an equation");
        if (head.text == "semiring") {
            lx.next();
            Token name = lx.next();
            if (name.kind != Token::ident) lx.fail(name, "expected a semiring name");
            const Semiring* sr = Semiring::find(name.text);
            if (!sr) lx.fail(name, "unknown semiring '" + name.text + "'");
            pf.semiring = sr;
            saw_semiring = true;
            continue;
        }
        if (head.text == "truncate") {
            lx.next();
            Token n = lx.next();
            if (n.kind != Token::number || n.text.find('.') != std::string::npos ||
                n.text[0] == '-')
                lx.fail(n, "expected a natural truncation degree");
            try {
                pf.truncate = static_cast<std::uint32_t>(std::stoul(n.text));
            } catch (const std::exception&) {
                lx.fail(n, "truncation degree out of range");
            }
            saw_truncate = true;
            continue;
        }
        if (head.text == "param" || head.text == "var") {
            bool is_param = head.text == "param";
            lx.next();
            Token id = lx.next();
            if (id.kind != Token::ident) lx.fail(id, "expected an identifier");
            while (id.kind == Token::ident) {
                auto& bucket = is_param ? pf.params : pf.vars;
                if (std::find(pf.params.begin(), pf.params.end(), id.text) !=
                        pf.params.end() ||
                    std::find(pf.vars.begin(), pf.vars.end(), id.text) !=
                        pf.vars.end())
                    lx.fail(id, "identifier '" + id.text + "' declared twice");
                bucket.push_back(id.text);
                if (lx.peek().kind != Token::ident) break;
                id = lx.next();
            }
            Token rest = lx.peek();
            if (rest.kind != Token::end)
                lx.fail(rest, "unexpected token '" + rest.text + "'");
            continue;
        }
        // an equation line: ident = poly
        Token lhs = lx.next();
        Token eq = lx.next();
        if (eq.kind != Token::punct || eq.text != "=")
            lx.fail(eq, "expected '=' after '" + lhs.text + "'");
        if (std::find(pf.vars.begin(), pf.vars.end(), lhs.text) == pf.vars.end())
            lx.fail(lhs, "equation for undeclared unknown '" + lhs.text + "'");
        for (const auto& [v, t] : pf.equations)
            if (v == lhs.text)
                lx.fail(lhs, "duplicate equation for unknown '" + lhs.text + "'");
        // keep the raw source line so later errors carry true positions
        pf.equations.emplace_back(lhs.text, raw);
        pf.equation_lines.push_back(no);
    }
    if (!saw_semiring) throw ParseError(1, 1, "missing 'semiring' directive");
    if (!saw_truncate) throw ParseError(1, 1, "missing 'truncate' directive");
    if (pf.vars.empty()) throw ParseError(1, 1, "no unknowns declared");
    return pf;
}

EquationSystem parse_system(const std::string& text,
                            const Semiring* semiring_override,
                            std::optional<std::uint32_t> degree_override) {
    ProblemFile pf = parse_problem_file(text);
    const Semiring& sr = semiring_override ? *semiring_override : *pf.semiring;
    std::uint32_t degree = degree_override.value_or(pf.truncate);

    std::vector<std::string> ctx = pf.params;
    ctx.insert(ctx.end(), pf.vars.begin(), pf.vars.end());
    std::vector<Series> rhs;
    for (const auto& v : pf.vars) {
        auto it = std::find_if(pf.equations.begin(), pf.equations.end(),
                               [&](const auto& kv) { return kv.first == v; });
        if (it == pf.equations.end())
            throw ParseError(1, 1, "unknown " + v + " has no equation");
        int line_no =
            pf.equation_lines[static_cast<std::size_t>(it - pf.equations.begin())];
        LineLexer lx(it->second, line_no);
        lx.next();  // unknown name
        lx.next();  // '='
        rhs.push_back(parse_poly(lx, sr, ctx, degree));
    }
    return EquationSystem(pf.params, pf.vars, SeriesTuple(std::move(rhs)));
}

Series parse_series(const std::string& text, const Semiring& sr,
                    const std::vector<std::string>& variables,
                    std::uint32_t degree) {
    LineLexer lx(text, 1);
    return parse_poly(lx, sr, variables, degree);
}

GrammarFile parse_grammar_file(const std::string& text) {
    GrammarFile gf;
    auto is_nonterminal = [](const std::string& s) {
        return std::isupper(static_cast<unsigned char>(s[0]));
    };
    auto note_terminal = [&](const std::string& s) {
        if (std::find(gf.terminals.begin(), gf.terminals.end(), s) ==
            gf.terminals.end())
            gf.terminals.push_back(s);
    };
    std::vector<std::pair<Token, int>> pending_nonterminals;  // for validation
    for (const auto& [no, raw] : split_lines(text)) {
        LineLexer lx(raw, no);
        Token head = lx.peek();
        if (head.kind == Token::end) continue;
        if (head.kind != Token::ident)
            lx.fail(head, "expected a production or weight line");
        if (head.text == "weight") {
            lx.next();
            Token term = lx.next();
            if (term.kind != Token::ident || is_nonterminal(term.text))
                lx.fail(term, "expected a terminal after 'weight'");
            Token lit = lx.next();
            if (lit.kind != Token::number)
                lx.fail(lit, "expected a weight literal");
            note_terminal(term.text);
            gf.weights.emplace_back(term.text, lit.text);
            continue;
        }
        Token lhs = lx.next();
        if (!is_nonterminal(lhs.text))
            lx.fail(lhs, "production left-hand side must be a nonterminal "
                         "(uppercase identifier)");
        Token arrow = lx.next();
        if (arrow.kind != Token::punct || arrow.text != "->")
            lx.fail(arrow, "expected '->'");
        if (std::find(gf.nonterminals.begin(), gf.nonterminals.end(), lhs.text) ==
            gf.nonterminals.end())
            gf.nonterminals.push_back(lhs.text);
        if (gf.start.empty()) gf.start = lhs.text;

        std::vector<std::vector<std::string>> alternatives;
        std::vector<std::string> current;
        bool saw_symbol = false;
        for (Token t = lx.next(); t.kind != Token::end; t = lx.next()) {
            if (t.kind == Token::punct && t.text == "|") {
                if (!saw_symbol) lx.fail(t, "empty alternative");
                alternatives.push_back(current);
                current.clear();
                saw_symbol = false;
                continue;
            }
            if (t.kind != Token::ident)
                lx.fail(t, "expected a grammar symbol");
            saw_symbol = true;
            if (t.text == "eps") continue;  // contributes the empty product
            if (is_nonterminal(t.text))
                pending_nonterminals.emplace_back(t, no);
            else
                note_terminal(t.text);
            current.push_back(t.text);
        }
        if (!saw_symbol) throw ParseError(no, 1, "empty production body");
        alternatives.push_back(current);

        auto it = std::find_if(gf.productions.begin(), gf.productions.end(),
                               [&](const auto& kv) { return kv.first == lhs.text; });
        if (it == gf.productions.end())
            gf.productions.emplace_back(lhs.text, std::move(alternatives));
        else
            it->second.insert(it->second.end(), alternatives.begin(),
                              alternatives.end());
    }
    if (gf.productions.empty()) throw ParseError(1, 1, "no productions");
    for (const auto& [tok, line] : pending_nonterminals)
        if (std::find(gf.nonterminals.begin(), gf.nonterminals.end(), tok.text) ==
            gf.nonterminals.end())
            throw ParseError(line, tok.column,
                             "nonterminal '" + tok.text + "' has no production");
    return gf;
}

EquationSystem parse_grammar(const std::string& text, const Semiring& sr,
                             std::uint32_t degree) {
    GrammarFile gf = parse_grammar_file(text);
    std::vector<std::string> ctx = {"z"};
    ctx.insert(ctx.end(), gf.nonterminals.begin(), gf.nonterminals.end());

    // per-terminal weights default to one
    auto weight_of = [&](const std::string& t) -> Value {
        for (const auto& [name, lit] : gf.weights)
            if (name == t) {
                if (lit.find('.') != std::string::npos)
                    return sr.from_decimal(std::stod(lit));
                return sr.from_integer(std::stoll(lit));
            }
        return sr.one();
    };

    std::vector<Series> rhs;
    for (const auto& n : gf.nonterminals) {
        Series sum(sr, ctx, degree);
        auto it = std::find_if(gf.productions.begin(), gf.productions.end(),
                               [&](const auto& kv) { return kv.first == n; });
        for (const auto& alt : it->second) {
            Series prod = Series::constant(sr, ctx, degree, sr.one());
            for (const auto& sym : alt) {
                auto nt = std::find(gf.nonterminals.begin(), gf.nonterminals.end(),
                                    sym);
                if (nt != gf.nonterminals.end()) {
                    std::size_t idx =
                        1 + static_cast<std::size_t>(nt - gf.nonterminals.begin());
                    prod = prod * Series::variable(sr, ctx, degree, idx);
                } else {
                    Series factor(sr, ctx, degree);
                    Exponents e(ctx.size(), 0);
                    e[0] = 1;
                    factor.accumulate(e, weight_of(sym));
                    prod = prod * factor;
                }
            }
            sum = sum + prod;
        }
        rhs.push_back(std::move(sum));
    }
    return EquationSystem({"z"}, gf.nonterminals, SeriesTuple(std::move(rhs)));
}

std::string solution_table(const std::vector<std::string>& unknowns,
                           const SeriesTuple& solution) {
    std::ostringstream out;
    out << "# unknown\tmonomial\tcoefficient\n";
    for (std::size_t i = 0; i < unknowns.size(); ++i) {
        const Series& s = solution[i];
        if (s.is_zero()) {
            out << unknowns[i] << "\t1\t" << s.semiring().zero().str() << "\n";
            continue;
        }
        for (const auto& [e, c] : s.terms()) {
            out << unknowns[i] << "\t";
            if (total_degree(e) == 0) {
                out << "1";
            } else {
                bool first = true;
                for (std::size_t v = 0; v < e.size(); ++v) {
                    if (e[v] == 0) continue;
                    if (!first) out << "*";
                    out << s.variables()[v];
                    if (e[v] > 1) out << "^" << e[v];
                    first = false;
                }
            }
            out << "\t" << c.str() << "\n";
        }
    }
    return out.str();
}

}  // namespace fixdiff
