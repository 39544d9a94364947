#include "qcfl/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "qcfl/errors.hpp"

namespace qcfl {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

/// Line-oriented reader; '#'-prefixed lines are comments.
class Lines {
public:
    explicit Lines(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        std::size_t number = 0;
        while (std::getline(in, line)) {
            ++number;
            std::string s = strip(line);
            if (s.empty() || s[0] == '#') continue;
            lines_.push_back({number, std::move(s)});
        }
    }

    bool done() const { return pos_ >= lines_.size(); }
    std::size_t line_number() const {
        return done() ? (lines_.empty() ? 0 : lines_.back().first) : lines_[pos_].first;
    }
    const std::string& peek() const {
        if (done()) throw ParseError("unexpected end of input", line_number());
        return lines_[pos_].second;
    }
    std::string next() {
        std::string out = peek();
        ++pos_;
        return out;
    }
    /// Consumes the next line when it starts with the keyword; returns the rest.
    std::optional<std::string> accept(const std::string& keyword) {
        if (done()) return std::nullopt;
        const std::string& line = lines_[pos_].second;
        if (line == keyword) {
            ++pos_;
            return std::string("");
        }
        if (line.size() > keyword.size() && line.compare(0, keyword.size(), keyword) == 0 &&
            std::isspace(static_cast<unsigned char>(line[keyword.size()]))) {
            ++pos_;
            return strip(line.substr(keyword.size()));
        }
        return std::nullopt;
    }
    std::string expect(const std::string& keyword) {
        auto rest = accept(keyword);
        if (!rest) throw ParseError("expected '" + keyword + "'", line_number());
        return *rest;
    }

private:
    std::vector<std::pair<std::size_t, std::string>> lines_;
    std::size_t pos_ = 0;
};

std::vector<std::string> split_on(const std::string& s, const std::string& sep, std::size_t line,
                                  std::size_t expect_parts) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t at = s.find(sep, start);
        if (at == std::string::npos) {
            parts.push_back(strip(s.substr(start)));
            break;
        }
        parts.push_back(strip(s.substr(start, at - start)));
        start = at + sep.size();
    }
    if (expect_parts && parts.size() != expect_parts)
        throw ParseError("expected " + std::to_string(expect_parts) + " parts separated by '" + sep +
                             "'",
                         line);
    return parts;
}

} // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// --- domain specs -----------------------------------------------------------------

LatticeTable parse_lattice_table(const std::string& text) {
    Lines lines(text);
    lines.expect("lattice");
    LatticeTable table;
    table.elements = tokenize(lines.expect("elements"));
    table.bottom = strip(lines.expect("bottom"));
    table.top = strip(lines.expect("top"));
    while (!lines.done()) {
        std::size_t line = lines.line_number();
        auto toks = tokenize(lines.next());
        if (toks.size() != 4 || (toks[0] != "join" && toks[0] != "meet"))
            throw ParseError("expected 'join x y z' or 'meet x y z'", line);
        auto& target = toks[0] == "join" ? table.join : table.meet;
        if (!target.emplace(std::make_pair(toks[1], toks[2]), toks[3]).second)
            throw ParseError("duplicate table entry (" + toks[1] + "," + toks[2] + ")", line);
    }
    return table;
}

MagmaTable parse_magma_table(const std::string& text) {
    Lines lines(text);
    lines.expect("magma");
    MagmaTable table;
    table.elements = tokenize(lines.expect("elements"));
    table.zero = strip(lines.expect("zero"));
    table.one = strip(lines.expect("one"));
    while (!lines.done()) {
        std::size_t line = lines.line_number();
        auto toks = tokenize(lines.next());
        if (toks.size() != 4 || (toks[0] != "add" && toks[0] != "mul"))
            throw ParseError("expected 'add x y z' or 'mul x y z'", line);
        auto& target = toks[0] == "add" ? table.add : table.mul;
        if (!target.emplace(std::make_pair(toks[1], toks[2]), toks[3]).second)
            throw ParseError("duplicate table entry (" + toks[1] + "," + toks[2] + ")", line);
    }
    return table;
}

namespace {

DomainPtr parse_spec_tokens(const std::vector<std::string>& tokens, std::size_t& pos,
                            const std::filesystem::path& base_dir) {
    if (pos >= tokens.size()) throw ValidationError("incomplete weight-domain spec");
    const std::string head = tokens[pos++];
    if (head == "boolean") return boolean_domain();
    if (head == "nat") return nat_domain();
    if (head == "tropical") return tropical_domain();
    if (head == "avgsup") return avgsup_domain();
    if (head == "truncavg") {
        if (pos >= tokens.size()) throw ValidationError("truncavg needs a digit count");
        return truncavg_domain(static_cast<unsigned>(std::stoul(tokens[pos++])));
    }
    if (head == "chain") {
        if (pos >= tokens.size()) throw ValidationError("chain needs an element count");
        return chain_domain(static_cast<unsigned>(std::stoul(tokens[pos++])));
    }
    if (head == "lattice") {
        if (pos >= tokens.size()) throw ValidationError("lattice needs a table file path");
        std::string path = tokens[pos++];
        return lattice_domain(parse_lattice_table(read_file(base_dir / path)), "lattice " + path);
    }
    if (head == "magma-fold") {
        if (pos >= tokens.size()) throw ValidationError("magma-fold needs a table file path");
        std::string path = tokens[pos++];
        return magma_fold_domain(parse_magma_table(read_file(base_dir / path)), "magma-fold " + path);
    }
    if (head == "adjoin-unit") return adjoin_unit(parse_spec_tokens(tokens, pos, base_dir));
    if (head == "nat-product") return nat_product(parse_spec_tokens(tokens, pos, base_dir));
    throw ValidationError("unknown weight-domain spec: " + head);
}

} // namespace

DomainPtr make_domain(std::string_view spec_text, const std::filesystem::path& base_dir) {
    std::vector<std::string> tokens = tokenize(std::string(spec_text));
    std::size_t pos = 0;
    DomainPtr d = parse_spec_tokens(tokens, pos, base_dir);
    if (pos != tokens.size())
        throw ValidationError("trailing tokens in weight-domain spec: " + std::string(spec_text));
    return d;
}

// --- grammars ----------------------------------------------------------------------

WeightedGrammar parse_grammar(const std::string& text, const std::filesystem::path& base_dir) {
    Lines lines(text);
    lines.expect("grammar");
    DomainPtr domain = make_domain(lines.expect("domain"), base_dir);
    std::vector<std::string> terminals = tokenize(lines.expect("terminals"));
    std::vector<std::string> nonterminals = tokenize(lines.expect("nonterminals"));
    std::string start = strip(lines.expect("start"));

    std::vector<WeightedGrammar::Production> productions;
    while (!lines.done()) {
        std::size_t line = lines.line_number();
        std::string rest = lines.expect("prod");
        // <id>: <lhs> -> <syms>* @ <weight>
        std::size_t colon = rest.find(':');
        if (colon == std::string::npos) throw ParseError("expected '<id>:' after 'prod'", line);
        std::string id = strip(rest.substr(0, colon));
        if (id.empty()) throw ParseError("empty production id", line);
        auto arrow = split_on(rest.substr(colon + 1), "->", line, 2);
        std::string lhs = strip(arrow[0]);
        if (lhs.empty() || tokenize(lhs).size() != 1)
            throw ParseError("left-hand side must be one nonterminal", line);
        auto at = split_on(arrow[1], "@", line, 2);
        std::vector<std::string> rhs = tokenize(at[0]);
        Weight weight;
        try {
            weight = domain->parse_weight(strip(at[1]));
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), line);
        }
        productions.push_back({std::move(id), std::move(lhs), std::move(rhs), std::move(weight)});
    }
    try {
        return WeightedGrammar(domain, std::move(terminals), std::move(nonterminals),
                               std::move(start), std::move(productions));
    } catch (const ValidationError& e) {
        throw ParseError(e.what(), 1);
    }
}

std::string serialize_grammar(const WeightedGrammar& g) {
    std::ostringstream out;
    out << "grammar\n";
    out << "domain " << g.domain()->name() << "\n";
    out << "terminals";
    for (const auto& t : g.terminals()) out << " " << t;
    out << "\nnonterminals";
    for (const auto& n : g.nonterminals()) out << " " << n;
    out << "\nstart " << g.start() << "\n";
    for (const auto& p : g.productions()) {
        out << "prod " << p.id << ": " << p.lhs << " ->";
        for (const auto& s : p.rhs) out << " " << s;
        out << " @ " << p.weight.str() << "\n";
    }
    return out.str();
}

// --- pushdown machines -----------------------------------------------------------------

WeightedPushdown parse_pda(const std::string& text, const std::filesystem::path& base_dir) {
    Lines lines(text);
    lines.expect("pda");
    DomainPtr domain = make_domain(lines.expect("domain"), base_dir);
    std::vector<std::string> states = tokenize(lines.expect("states"));
    std::vector<std::string> stack = tokenize(lines.expect("stack"));
    std::size_t initial_line = lines.line_number();
    std::vector<std::string> initial = tokenize(lines.expect("initial"));
    if (initial.size() != 2)
        throw ParseError("expected 'initial <state> <stack-symbol>'", initial_line);
    std::vector<std::string> finals = tokenize(lines.expect("final"));

    std::vector<WeightedPushdown::Transition> transitions;
    while (!lines.done()) {
        std::size_t line = lines.line_number();
        std::string rest = lines.expect("trans");
        // <id>: <q>, <x|eps>, <g> -> <p>, [<push>*] @ <weight>
        std::size_t colon = rest.find(':');
        if (colon == std::string::npos) throw ParseError("expected '<id>:' after 'trans'", line);
        std::string id = strip(rest.substr(0, colon));
        auto arrow = split_on(rest.substr(colon + 1), "->", line, 2);
        auto left = split_on(arrow[0], ",", line, 3);
        auto at = split_on(arrow[1], "@", line, 2);
        auto right = split_on(at[0], ",", line, 2);
        std::size_t open = right[1].find('[');
        std::size_t close = right[1].rfind(']');
        if (open == std::string::npos || close == std::string::npos || close < open)
            throw ParseError("expected '[<push symbols>]'", line);
        std::vector<std::string> push = tokenize(right[1].substr(open + 1, close - open - 1));
        Weight weight;
        try {
            weight = domain->parse_weight(strip(at[1]));
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), line);
        }
        std::string label = left[1] == "eps" ? "" : left[1];
        transitions.push_back({std::move(id), left[0], std::move(label), left[2], right[0],
                               std::move(push), std::move(weight)});
    }
    try {
        return WeightedPushdown(domain, std::move(states), std::move(stack), initial[0], initial[1],
                                std::move(finals), std::move(transitions));
    } catch (const ValidationError& e) {
        throw ParseError(e.what(), 1);
    }
}

std::string serialize_pda(const WeightedPushdown& m) {
    std::ostringstream out;
    out << "pda\n";
    out << "domain " << m.domain()->name() << "\n";
    out << "states";
    for (const auto& q : m.states()) out << " " << q;
    out << "\nstack";
    for (const auto& g : m.stack_alphabet()) out << " " << g;
    out << "\ninitial " << m.initial_state() << " " << m.initial_symbol() << "\n";
    out << "final";
    for (const auto& f : m.final_states()) out << " " << f;
    out << "\n";
    for (const auto& t : m.transitions()) {
        out << "trans " << t.id << ": " << t.from << ", " << (t.label.empty() ? "eps" : t.label)
            << ", " << t.pop << " -> " << t.to << ", [";
        for (std::size_t i = 0; i < t.push.size(); ++i) {
            if (i) out << " ";
            out << t.push[i];
        }
        out << "] @ " << t.weight.str() << "\n";
    }
    return out.str();
}

// --- step functions -----------------------------------------------------------------------

StepFunction parse_stepfn(const std::string& text, const std::filesystem::path& base_dir) {
    Lines lines(text);
    lines.expect("stepfn");
    StepFunction sf;
    sf.domain = make_domain(lines.expect("domain"), base_dir);
    while (!lines.done()) {
        if (lines.accept("strong")) {
            sf.strong = true;
            continue;
        }
        std::size_t line = lines.line_number();
        std::string rest = lines.expect("step");
        auto toks = tokenize(rest);
        if (toks.size() != 2) throw ParseError("expected 'step <weight> <grammar-file>'", line);
        Weight weight;
        try {
            weight = sf.domain->parse_weight(toks[0]);
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), line);
        }
        WeightedGrammar language = parse_grammar(read_file(base_dir / toks[1]), base_dir);
        sf.steps.push_back({std::move(weight), std::move(language), /*unambiguous_claim=*/true});
    }
    return sf;
}

std::string serialize_stepfn_header(const StepFunction& sf,
                                    const std::vector<std::string>& grammar_files) {
    if (grammar_files.size() != sf.steps.size())
        throw ValidationError("one grammar file per step is required");
    std::ostringstream out;
    out << "stepfn\n";
    out << "domain " << sf.domain->name() << "\n";
    for (std::size_t i = 0; i < sf.steps.size(); ++i)
        out << "step " << sf.steps[i].weight.str() << " " << grammar_files[i] << "\n";
    if (sf.strong) out << "strong\n";
    return out.str();
}

// --- decompositions --------------------------------------------------------------------------

CSDecomposition parse_decomposition(const std::string& text, const std::filesystem::path& base_dir) {
    Lines lines(text);
    lines.expect("csdecomp");
    DomainPtr domain = make_domain(lines.expect("domain"), base_dir);
    std::vector<std::string> base = tokenize(lines.expect("brackets"));
    BracketAlphabet brackets(base);

    lines.expect("dfa");
    std::vector<std::string> states = tokenize(lines.expect("states"));
    std::string initial = strip(lines.expect("initial"));
    std::vector<std::string> accepting = tokenize(lines.expect("accepting"));
    std::vector<Dfa::Edge> edges;
    while (true) {
        if (lines.accept("enddfa")) break;
        std::size_t line = lines.line_number();
        auto toks = tokenize(lines.expect("edge"));
        if (toks.size() != 3) throw ParseError("expected 'edge <from> <letter> <to>'", line);
        edges.push_back({toks[0], toks[1], toks[2]});
    }
    Dfa control(brackets.all(), std::move(states), std::move(initial), std::move(accepting),
                std::move(edges));

    std::vector<std::string> source = brackets.all();
    std::vector<std::string> target;
    std::set<std::string> target_seen;
    std::map<std::string, Monome> images;
    while (!lines.done()) {
        std::size_t line = lines.line_number();
        std::string rest = lines.expect("morph");
        // <letter> -> <weight> . <sigma|eps>
        auto arrow = split_on(rest, "->", line, 2);
        auto dot = split_on(arrow[1], " . ", line, 2);
        Monome m;
        try {
            m.weight = domain->parse_weight(strip(dot[0]));
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), line);
        }
        std::string sym = strip(dot[1]);
        if (sym != "eps") {
            m.word.push_back(sym);
            if (target_seen.insert(sym).second) target.push_back(sym);
        }
        if (!images.emplace(strip(arrow[0]), std::move(m)).second)
            throw ParseError("duplicate morphism image for " + strip(arrow[0]), line);
    }
    try {
        AlphabeticMorphism morphism(domain, std::move(source), std::move(target), std::move(images));
        return CSDecomposition{std::move(brackets), std::move(control), std::move(morphism)};
    } catch (const ValidationError& e) {
        throw ParseError(e.what(), 1);
    }
}

std::string serialize_decomposition(const CSDecomposition& dec) {
    std::ostringstream out;
    out << "csdecomp\n";
    out << "domain " << dec.morphism.domain()->name() << "\n";
    out << "brackets";
    for (const auto& y : dec.brackets.base()) out << " " << y;
    out << "\ndfa\nstates";
    for (const auto& q : dec.control.states()) out << " " << q;
    out << "\ninitial " << dec.control.initial() << "\n";
    out << "accepting";
    for (const auto& q : dec.control.accepting()) out << " " << q;
    out << "\n";
    // the full transition function, so reparsing needs no completion
    for (const auto& q : dec.control.states())
        for (const auto& letter : dec.control.alphabet())
            out << "edge " << q << " " << letter << " " << dec.control.next(q, letter) << "\n";
    out << "enddfa\n";
    for (const auto& letter : dec.morphism.source_alphabet()) {
        const Monome& m = dec.morphism.image(letter);
        out << "morph " << letter << " -> " << m.weight.str() << " . "
            << (m.word.empty() ? "eps" : m.word.front()) << "\n";
    }
    return out.str();
}

ArtifactKind detect_artifact(const std::string& text) {
    Lines lines(text);
    if (lines.done()) throw ValidationError("empty artifact file");
    const std::string& head = lines.peek();
    auto first = tokenize(head);
    if (first.empty()) throw ValidationError("empty artifact file");
    if (first[0] == "grammar") return ArtifactKind::Grammar;
    if (first[0] == "pda") return ArtifactKind::Pushdown;
    if (first[0] == "stepfn") return ArtifactKind::StepFunction;
    if (first[0] == "csdecomp") return ArtifactKind::Decomposition;
    throw ValidationError("unknown artifact header: " + first[0]);
}

} // namespace qcfl
