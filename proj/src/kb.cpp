#include "assoc/kb.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "assoc/error.hpp"

namespace assoc {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

bool reserved_char(char c) {
    switch (c) {
        case '(': case ')': case ',': case '.': case '|': case '#':
        case ':': case '?': case '[': case ']': case '"':
            return true;
        default:
            return false;
    }
}

// Identifiers for constants, functions and predicates start with a lowercase
// ASCII letter, a digit or a non-ASCII byte (UTF-8 continuation is opaque).
bool ident_start(char c) {
    const auto u = static_cast<unsigned char>(c);
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || u >= 0x80;
}

bool variable_start(char c) { return (c >= 'A' && c <= 'Z') || c == '_'; }

bool ident_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-' || c == '\'' || u >= 0x80;
}

}  // namespace

std::string normalize_concept(std::string_view raw) {
    std::size_t b = 0;
    std::size_t e = raw.size();
    while (b < e && is_space(raw[b])) ++b;
    while (e > b && is_space(raw[e - 1])) --e;

    std::string out;
    out.reserve(e - b);
    for (std::size_t i = b; i < e; ++i) {
        char c = raw[i];
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (is_space(c) || reserved_char(c)) c = '_';
        out += c;
    }
    // A leading '_' or '-' would read back as a variable or an arrow.
    std::size_t lead = 0;
    while (lead < out.size() && !ident_start(out[lead])) ++lead;
    out.erase(0, lead);
    return out;
}

TripleParseResult parse_triples(std::istream& in, TripleFormat format) {
    if (!in) throw LoadError("triple stream is not readable");
    const char delimiter = format == TripleFormat::Csv ? ',' : '\t';

    TripleParseResult result;
    std::string line;
    std::size_t line_no = 0;
    std::size_t content_lines = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        ++content_lines;

        std::vector<std::string_view> fields;
        std::string_view rest(line);
        while (fields.size() < 3) {
            const auto cut = rest.find(delimiter);
            fields.push_back(rest.substr(0, cut));
            if (cut == std::string_view::npos) break;
            rest.remove_prefix(cut + 1);
        }
        if (fields.size() < 3) {
            result.skipped.push_back(
                {line_no, "expected 3 fields, found " + std::to_string(fields.size())});
            continue;
        }
        Triple t{normalize_concept(fields[0]), normalize_concept(fields[1]), normalize_concept(fields[2])};
        if (t.subject.empty() || t.relation.empty() || t.object.empty()) {
            result.skipped.push_back({line_no, "empty field after normalization"});
            continue;
        }
        result.triples.push_back(std::move(t));
    }
    if (in.bad()) throw LoadError("read error in triple stream at line " + std::to_string(line_no));
    if (result.skipped.size() * 2 > content_lines) {
        throw FormatError("triple input rejected: " + std::to_string(result.skipped.size()) + " of " +
                          std::to_string(content_lines) + " lines malformed");
    }
    return result;
}

std::string SkolemNamer::next() {
    std::string name;
    do {
        name = prefix_ + std::to_string(++counter_);
    } while (reserved_.contains(name));
    return name;
}

Clause triple_to_clause(const Triple& t, SkolemNamer& namer, std::string id) {
    const Term x = Term::variable("X");
    const Term witness = Term::function(namer.next(), {x});
    Clause c;
    c.body.push_back(Atom{t.subject, {x}});
    c.heads.push_back({Atom{t.relation, {x, witness}}, Atom{t.object, {witness}}});
    c.id = std::move(id);
    c.provenance = Provenance::Triple;
    return c;
}

std::vector<Clause> triples_to_clauses(const std::vector<Triple>& triples, std::string_view id_prefix) {
    SkolemNamer namer;
    std::vector<Clause> out;
    out.reserve(triples.size());
    for (std::size_t i = 0; i < triples.size(); ++i) {
        out.push_back(triple_to_clause(triples[i], namer, std::string(id_prefix) + std::to_string(i + 1)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Clause syntax

namespace {

enum class Tok { Ident, Var, LParen, RParen, Comma, Arrow, Bar, Dot, Exists, RBracket, Colon, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

const char* describe(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Var: return "variable";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Comma: return "','";
        case Tok::Arrow: return "'->'";
        case Tok::Bar: return "'|'";
        case Tok::Dot: return "'.'";
        case Tok::Exists: return "'?['";
        case Tok::RBracket: return "']'";
        case Tok::Colon: return "':'";
        case Tok::End: return "end of input";
    }
    return "token";
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_blank();
        Token tok;
        tok.line = line_;
        tok.column = column_;
        if (pos_ >= text_.size()) return tok;

        const char c = text_[pos_];
        auto single = [&](Tok kind) {
            advance();
            tok.kind = kind;
            return tok;
        };
        switch (c) {
            case '(': return single(Tok::LParen);
            case ')': return single(Tok::RParen);
            case ',': return single(Tok::Comma);
            case '|': return single(Tok::Bar);
            case '.': return single(Tok::Dot);
            case ']': return single(Tok::RBracket);
            case ':': return single(Tok::Colon);
            default: break;
        }
        if (c == '-' && peek(1) == '>') {
            advance();
            advance();
            tok.kind = Tok::Arrow;
            return tok;
        }
        if (c == '?' && peek(1) == '[') {
            advance();
            advance();
            tok.kind = Tok::Exists;
            return tok;
        }
        if (ident_start(c) || variable_start(c)) {
            tok.kind = variable_start(c) ? Tok::Var : Tok::Ident;
            while (pos_ < text_.size() && ident_char(text_[pos_])) {
                if (text_[pos_] == '-' && peek(1) == '>') break;
                tok.text += text_[pos_];
                advance();
            }
            return tok;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
    }

private:
    char peek(std::size_t ahead) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (pos_ < text_.size()) {
            if (is_space(text_[pos_])) {
                advance();
            } else if (text_[pos_] == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

struct RawAlternative {
    std::vector<std::string> existentials;
    std::vector<Atom> atoms;
};

struct RawClause {
    std::vector<Atom> body;
    std::vector<RawAlternative> heads;
    std::size_t line = 0;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { shift(); }

    std::vector<RawClause> parse_all() {
        std::vector<RawClause> out;
        while (tok_.kind != Tok::End) out.push_back(parse_clause());
        return out;
    }

private:
    void shift() { tok_ = lexer_.next(); }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + ", found " + describe(tok_.kind) +
                             (tok_.text.empty() ? "" : " '" + tok_.text + "'"),
                         tok_.line, tok_.column);
    }

    void expect(Tok kind) {
        if (tok_.kind != kind) fail(std::string("expected ") + describe(kind));
        shift();
    }

    RawClause parse_clause() {
        RawClause c;
        c.line = tok_.line;
        if (tok_.kind != Tok::Arrow) {
            c.body.push_back(parse_atom());
            while (tok_.kind == Tok::Comma) {
                shift();
                c.body.push_back(parse_atom());
            }
        }
        expect(Tok::Arrow);
        if (tok_.kind != Tok::Dot) {
            c.heads.push_back(parse_alternative());
            while (tok_.kind == Tok::Bar) {
                shift();
                c.heads.push_back(parse_alternative());
            }
        }
        expect(Tok::Dot);
        return c;
    }

    RawAlternative parse_alternative() {
        RawAlternative alt;
        if (tok_.kind == Tok::Exists) {
            shift();
            for (;;) {
                if (tok_.kind != Tok::Var) fail("expected variable in '?[...]'");
                alt.existentials.push_back(tok_.text);
                shift();
                if (tok_.kind != Tok::Comma) break;
                shift();
            }
            expect(Tok::RBracket);
            expect(Tok::Colon);
        }
        alt.atoms.push_back(parse_atom());
        while (tok_.kind == Tok::Comma) {
            shift();
            alt.atoms.push_back(parse_atom());
        }
        return alt;
    }

    Atom parse_atom() {
        if (tok_.kind != Tok::Ident) fail("expected predicate symbol");
        Atom a{tok_.text, {}};
        shift();
        a.args = parse_args();
        return a;
    }

    std::vector<Term> parse_args() {
        expect(Tok::LParen);
        std::vector<Term> args;
        args.push_back(parse_term());
        while (tok_.kind == Tok::Comma) {
            shift();
            args.push_back(parse_term());
        }
        expect(Tok::RParen);
        return args;
    }

    Term parse_term() {
        if (tok_.kind == Tok::Var) {
            Term t = Term::variable(tok_.text);
            shift();
            return t;
        }
        if (tok_.kind != Tok::Ident) fail("expected term");
        std::string name = tok_.text;
        shift();
        if (tok_.kind == Tok::LParen) return Term::function(std::move(name), parse_args());
        return Term::constant(std::move(name));
    }

    Lexer lexer_;
    Token tok_;
};

void collect_function_names(const Term& t, std::vector<std::string>& out) {
    if (t.is_variable()) return;
    out.push_back(t.name);
    for (const auto& a : t.args) collect_function_names(a, out);
}

void collect_body_variables(const Term& t, std::vector<std::string>& order) {
    if (t.is_variable()) {
        if (std::find(order.begin(), order.end(), t.name) == order.end()) order.push_back(t.name);
        return;
    }
    for (const auto& a : t.args) collect_body_variables(a, order);
}

Term substitute(const Term& t, const std::unordered_map<std::string, Term>& subst) {
    if (t.is_variable()) {
        auto it = subst.find(t.name);
        return it == subst.end() ? t : it->second;
    }
    Term out = t;
    for (auto& a : out.args) a = substitute(a, subst);
    return out;
}

}  // namespace

void reserve_function_symbols(SkolemNamer& namer, const std::vector<Clause>& clauses) {
    std::vector<std::string> names;
    for (const auto& c : clauses) {
        for (const auto& a : c.body)
            for (const auto& t : a.args) collect_function_names(t, names);
        for (const auto& alt : c.heads)
            for (const auto& a : alt)
                for (const auto& t : a.args) collect_function_names(t, names);
    }
    for (auto& n : names) namer.reserve(std::move(n));
}

std::vector<Clause> parse_clause_text(std::string_view text, std::string_view id_prefix, SkolemNamer& namer) {
    std::vector<RawClause> raw = Parser(text).parse_all();

    // Existing constant and function names must not be reused as Skolem names.
    {
        std::vector<std::string> names;
        for (const auto& rc : raw) {
            for (const auto& a : rc.body)
                for (const auto& t : a.args) collect_function_names(t, names);
            for (const auto& alt : rc.heads)
                for (const auto& a : alt.atoms)
                    for (const auto& t : a.args) collect_function_names(t, names);
        }
        for (auto& n : names) namer.reserve(std::move(n));
    }

    std::vector<Clause> out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        RawClause& rc = raw[i];
        Clause c;
        c.id = std::string(id_prefix) + std::to_string(i + 1);
        c.provenance = Provenance::File;

        std::vector<std::string> universals;
        for (const auto& a : rc.body)
            for (const auto& t : a.args) collect_body_variables(t, universals);

        for (auto& alt : rc.heads) {
            std::unordered_map<std::string, Term> subst;
            for (const auto& v : alt.existentials) {
                if (std::find(universals.begin(), universals.end(), v) != universals.end()) {
                    throw ParseError("existential variable " + v + " also occurs in the body of clause " +
                                         c.id,
                                     rc.line, 1);
                }
                if (universals.empty()) {
                    subst.emplace(v, Term::constant(namer.next()));
                } else {
                    std::vector<Term> args;
                    for (const auto& u : universals) args.push_back(Term::variable(u));
                    subst.emplace(v, Term::function(namer.next(), std::move(args)));
                }
            }
            std::vector<Atom> atoms;
            for (auto& a : alt.atoms) {
                Atom s{std::move(a.predicate), {}};
                for (const auto& t : a.args) s.args.push_back(substitute(t, subst));
                atoms.push_back(std::move(s));
            }
            c.heads.push_back(std::move(atoms));
        }
        c.body = std::move(rc.body);
        check_range_restricted(c);
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Clause> parse_clause_text(std::string_view text, std::string_view id_prefix) {
    SkolemNamer namer;
    return parse_clause_text(text, id_prefix, namer);
}

std::vector<Clause> parse_clause_file(std::istream& in, std::string_view id_prefix, SkolemNamer& namer) {
    if (!in) throw LoadError("clause stream is not readable");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw LoadError("read error in clause stream");
    return parse_clause_text(buffer.str(), id_prefix, namer);
}

std::vector<Clause> parse_clause_file(std::istream& in, std::string_view id_prefix) {
    SkolemNamer namer;
    return parse_clause_file(in, id_prefix, namer);
}

std::string serialize_clauses(const std::vector<Clause>& clauses) {
    std::string out;
    for (const auto& c : clauses) {
        out += to_string(c);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Knowledge base

const std::vector<std::size_t>& KnowledgeBase::clauses_with(std::string_view predicate) const {
    static const std::vector<std::size_t> none;
    auto it = symbol_index_.find(predicate);
    return it == symbol_index_.end() ? none : it->second;
}

std::size_t KnowledgeBase::occurrence_count(std::string_view predicate) const {
    return clauses_with(predicate).size();
}

int KnowledgeBase::arity(std::string_view predicate) const {
    auto it = arity_.find(predicate);
    return it == arity_.end() ? -1 : it->second;
}

bool KnowledgeBase::has_predicate(std::string_view predicate) const {
    return symbol_index_.find(predicate) != symbol_index_.end();
}

KnowledgeBase build_kb(std::vector<Clause> clauses) {
    KnowledgeBase kb;
    std::unordered_set<std::string> ids;
    std::unordered_map<std::string, std::size_t> arity_origin;

    auto check_arity = [&](const Atom& a, std::size_t index) {
        const int n = static_cast<int>(a.args.size());
        auto [it, inserted] = kb.arity_.emplace(a.predicate, n);
        if (inserted) {
            arity_origin.emplace(a.predicate, index);
        } else if (it->second != n) {
            const auto& first = clauses[arity_origin.at(a.predicate)].id;
            throw ArityClashError("predicate " + a.predicate + " has arity " + std::to_string(it->second) +
                                  " in clause " + first + " but arity " + std::to_string(n) +
                                  " in clause " + clauses[index].id);
        }
    };

    for (std::size_t i = 0; i < clauses.size(); ++i) {
        const Clause& c = clauses[i];
        if (!ids.insert(c.id).second) throw FormatError("duplicate clause id " + c.id);
        for (const auto& a : c.body) check_arity(a, i);
        for (const auto& alt : c.heads)
            for (const auto& a : alt) check_arity(a, i);
        for (auto& s : predicate_symbols(c)) kb.symbol_index_[std::move(s)].push_back(i);
    }
    kb.clauses_ = std::move(clauses);
    return kb;
}

}  // namespace assoc
