#include "hdta/io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "hdta/errors.hpp"

namespace hdta {

namespace {

enum class Tok : std::uint8_t { Word, Op, End };

struct Token {
  Tok kind;
  std::string text;
  int column;
};

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("_'.@/:$~+*^%?").find(c) != std::string_view::npos;
}

class Lexer {
 public:
  Lexer(std::string_view line, int line_no) : line_no_(line_no) {
    std::size_t i = 0;
    while (i < line.size()) {
      char c = line[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      const int col = static_cast<int>(i) + 1;
      if (word_char(c)) {
        std::size_t j = i;
        while (j < line.size() && word_char(line[j])) ++j;
        toks_.push_back({Tok::Word, std::string(line.substr(i, j - i)), col});
        i = j;
        continue;
      }
      static const char* ops[] = {"->", "<=", ">=", "==", "!=", "&&", "||", "<", ">", "!", "&", "|",
                                  "(", ")", "{", "}", ",", "-"};
      bool matched = false;
      for (const char* op : ops) {
        std::string_view o(op);
        if (line.substr(i, o.size()) == o) {
          toks_.push_back({Tok::Op, std::string(o), col});
          i += o.size();
          matched = true;
          break;
        }
      }
      if (!matched) fail(col, std::string("unexpected character '") + c + "'");
    }
    end_col_ = static_cast<int>(line.size()) + 1;
  }

  const Token& peek() const {
    static Token end{Tok::End, "", 0};
    if (pos_ < toks_.size()) return toks_[pos_];
    end.column = end_col_;
    return end;
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return pos_ >= toks_.size(); }
  bool accept_op(std::string_view op) {
    if (peek().kind == Tok::Op && peek().text == op) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_word(std::string_view w) {
    if (peek().kind == Tok::Word && peek().text == w) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect_op(std::string_view op) {
    if (!accept_op(op)) fail(peek().column, "expected '" + std::string(op) + "'");
  }
  std::string expect_word(const std::string& what) {
    if (peek().kind != Tok::Word) fail(peek().column, "expected " + what);
    return next().text;
  }
  std::int64_t expect_int(const std::string& what) {
    const Token t = peek();
    std::string w = expect_word(what);
    for (char c : w)
      if (!std::isdigit(static_cast<unsigned char>(c))) fail(t.column, "expected " + what);
    try {
      return std::stoll(w);
    } catch (const std::exception&) {
      fail(t.column, "number out of range");
    }
  }
  [[noreturn]] void fail(int column, const std::string& msg) const {
    throw InputError("line " + std::to_string(line_no_) + ", column " + std::to_string(column) + ": " + msg);
  }
  int line() const { return line_no_; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int line_no_;
  int end_col_ = 1;
};

using Dnf = std::vector<std::vector<GuardAtom>>;

Dnf dnf_or(Dnf a, const Dnf& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Dnf dnf_and(const Dnf& a, const Dnf& b) {
  Dnf out;
  for (const auto& x : a)
    for (const auto& y : b) {
      auto z = x;
      z.insert(z.end(), y.begin(), y.end());
      out.push_back(std::move(z));
    }
  return out;
}

class GuardParser {
 public:
  GuardParser(Lexer& lx, const std::map<std::string, ClockId>& clocks) : lx_(lx), clocks_(clocks) {}

  Dnf parse() { return parse_or(false); }

 private:
  bool at_op(std::string_view a, std::string_view b) const {
    const auto& t = lx_.peek();
    return t.kind == Tok::Op && (t.text == a || t.text == b);
  }

  Dnf parse_or(bool neg) {
    Dnf acc = parse_and(neg);
    while (at_op("|", "||")) {
      lx_.next();
      Dnf rhs = parse_and(neg);
      acc = neg ? dnf_and(acc, rhs) : dnf_or(std::move(acc), rhs);
    }
    return acc;
  }

  Dnf parse_and(bool neg) {
    Dnf acc = parse_unary(neg);
    while (at_op("&", "&&")) {
      lx_.next();
      Dnf rhs = parse_unary(neg);
      acc = neg ? dnf_or(std::move(acc), rhs) : dnf_and(acc, rhs);
    }
    return acc;
  }

  Dnf parse_unary(bool neg) {
    if (lx_.accept_op("!")) return parse_unary(!neg);
    if (lx_.accept_op("(")) {
      Dnf d = parse_or(neg);
      lx_.expect_op(")");
      return d;
    }
    if (lx_.accept_word("true")) return neg ? Dnf{} : Dnf{{}};
    if (lx_.accept_word("false")) return neg ? Dnf{{}} : Dnf{};
    return parse_atom(neg);
  }

  ClockId clock(const Token& t) {
    auto it = clocks_.find(t.text);
    if (it == clocks_.end()) lx_.fail(t.column, "unknown clock '" + t.text + "'");
    return it->second;
  }

  Dnf parse_atom(bool neg) {
    const Token lt = lx_.peek();
    if (lt.kind != Tok::Word) lx_.fail(lt.column, "expected a clock constraint");
    lx_.next();
    ClockId left = clock(lt);
    ClockId right = kZeroClock;
    if (lx_.accept_op("-")) {
      const Token rt = lx_.peek();
      if (rt.kind != Tok::Word) lx_.fail(rt.column, "expected a clock");
      lx_.next();
      right = clock(rt);
      if (right == left) lx_.fail(rt.column, "diagonal atom compares a clock with itself");
    }
    const Token op = lx_.next();
    static const std::map<std::string, int> rels{{"<", 0}, {"<=", 1}, {">", 2}, {">=", 3}, {"==", 4}, {"!=", 5}};
    auto rit = op.kind == Tok::Op ? rels.find(op.text) : rels.end();
    if (rit == rels.end()) lx_.fail(op.column, "expected a comparison operator");
    bool negative = lx_.accept_op("-");
    const Token nt = lx_.peek();
    std::int64_t n = lx_.expect_int("an integer constant");
    int code = rit->second;
    if (negative && n != 0) {
      if (right == kZeroClock) lx_.fail(nt.column, "negative constant in a clock bound");
      // x - y <| -n  <=>  y - x |> n
      std::swap(left, right);
      static const int flip[] = {2, 3, 0, 1, 4, 5};
      code = flip[code];
    }
    auto atom = [&](Relation r) { return GuardAtom{left, right, r, n}; };
    auto single = [&](Relation r) {
      GuardAtom a = atom(r);
      return Dnf{{neg ? a.negated() : a}};
    };
    switch (code) {
      case 0: return single(Relation::Lt);
      case 1: return single(Relation::Le);
      case 2: return single(Relation::Gt);
      case 3: return single(Relation::Ge);
      case 4:
        return neg ? Dnf{{atom(Relation::Lt)}, {atom(Relation::Gt)}}
                   : Dnf{{atom(Relation::Le), atom(Relation::Ge)}};
      default:
        return neg ? Dnf{{atom(Relation::Le), atom(Relation::Ge)}}
                   : Dnf{{atom(Relation::Lt)}, {atom(Relation::Gt)}};
    }
  }

  Lexer& lx_;
  const std::map<std::string, ClockId>& clocks_;
};

struct StateDecl {
  std::optional<int> mark;
  std::string mark_word;
  std::optional<Player> owner;
  int line = 0;
};

struct TransDecl {
  std::string src, dst, letter;
  std::vector<std::pair<std::string, int>> resets;  // name, column
  std::optional<int> priority;
  int line = 0;
  int letter_col = 0;
  std::string guard_text;
};

std::string strip_comment(std::string_view line) {
  auto pos = line.find('#');
  return std::string(pos == std::string_view::npos ? line : line.substr(0, pos));
}

}  // namespace

TaDocument parse_ta(std::string_view text) {
  TaDocument doc;
  TimedAutomaton& ta = doc.ta;
  std::optional<std::string> name, initial;
  std::optional<AcceptanceKind> kind;
  bool have_clocks = false, have_alphabet = false;
  std::vector<std::string> state_order;
  std::map<std::string, StateDecl> states;
  std::vector<TransDecl> trans;
  std::vector<std::pair<int, std::string>> guard_lines;
  int initial_line = 0;

  int line_no = 0;
  std::map<std::string, int> first_use;
  auto mention = [&](const std::string& s) {
    first_use.emplace(s, line_no);
    if (!states.count(s)) {
      states[s] = {};
      state_order.push_back(s);
    }
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_comment(raw);
    Lexer lx(line, line_no);
    if (lx.at_end()) continue;
    const Token head = lx.next();
    if (head.kind != Tok::Word) lx.fail(head.column, "expected a keyword");
    const std::string& kw = head.text;
    if (kw == "ta") {
      if (name) lx.fail(head.column, "duplicate 'ta' line");
      name = lx.expect_word("an automaton name");
    } else if (kw == "clocks") {
      if (have_clocks) lx.fail(head.column, "duplicate 'clocks' line");
      have_clocks = true;
      while (!lx.at_end()) {
        const Token t = lx.peek();
        std::string c = lx.expect_word("a clock name");
        for (const auto& o : ta.clocks)
          if (o == c) lx.fail(t.column, "duplicate clock '" + c + "'");
        ta.clocks.push_back(c);
        lx.accept_op(",");
      }
    } else if (kw == "alphabet") {
      if (have_alphabet) lx.fail(head.column, "duplicate 'alphabet' line");
      have_alphabet = true;
      while (!lx.at_end()) {
        const Token t = lx.peek();
        std::string a = lx.expect_word("a letter");
        for (const auto& o : ta.alphabet)
          if (o == a) lx.fail(t.column, "duplicate letter '" + a + "'");
        ta.alphabet.push_back(a);
        lx.accept_op(",");
      }
    } else if (kw == "acceptance") {
      if (kind) lx.fail(head.column, "duplicate 'acceptance' line");
      const Token t = lx.peek();
      std::string k = lx.expect_word("an acceptance kind");
      static const std::map<std::string, AcceptanceKind> kinds{
          {"safety", AcceptanceKind::Safety}, {"reachability", AcceptanceKind::Reachability},
          {"buchi", AcceptanceKind::Buchi},   {"cobuchi", AcceptanceKind::CoBuchi},
          {"parity", AcceptanceKind::Parity}};
      auto it = kinds.find(k);
      if (it == kinds.end()) lx.fail(t.column, "unknown acceptance kind '" + k + "'");
      kind = it->second;
    } else if (kw == "initial") {
      if (initial) lx.fail(head.column, "duplicate 'initial' line");
      initial = lx.expect_word("a state name");
      initial_line = line_no;
      mention(*initial);
    } else if (kw == "state") {
      std::string q = lx.expect_word("a state name");
      mention(q);
      StateDecl& d = states[q];
      if (d.line) lx.fail(head.column, "state '" + q + "' declared twice");
      d.line = line_no;
      while (!lx.at_end()) {
        const Token t = lx.next();
        if (t.kind != Tok::Word) lx.fail(t.column, "unexpected '" + t.text + "'");
        if (t.text == "owner") {
          const Token o = lx.peek();
          std::string p = lx.expect_word("P1 or P2");
          if (p == "P1")
            d.owner = Player::One;
          else if (p == "P2")
            d.owner = Player::Two;
          else
            lx.fail(o.column, "owner must be P1 or P2");
        } else if (t.text == "priority") {
          d.mark = static_cast<int>(lx.expect_int("a priority"));
          d.mark_word = "priority";
        } else if (t.text == "safe" || t.text == "final" || t.text == "accepting") {
          d.mark = 1;
          d.mark_word = t.text;
        } else if (t.text == "unsafe") {
          d.mark = 0;
          d.mark_word = t.text;
        } else {
          lx.fail(t.column, "unknown state attribute '" + t.text + "'");
        }
      }
    } else if (kw == "trans") {
      TransDecl d;
      d.line = line_no;
      d.src = lx.expect_word("a source state");
      lx.expect_op("->");
      d.dst = lx.expect_word("a target state");
      if (!lx.accept_word("on")) lx.fail(lx.peek().column, "expected 'on'");
      d.letter_col = lx.peek().column;
      d.letter = lx.expect_word("a letter");
      mention(d.src);
      mention(d.dst);
      // The guard is parsed once clocks are known; remember its extent.
      if (lx.accept_word("when")) {
        const int start = lx.peek().column;
        int depth = 0;
        while (!lx.at_end()) {
          const Token& t = lx.peek();
          if (depth == 0 && t.kind == Tok::Word && (t.text == "reset" || t.text == "priority")) break;
          if (t.kind == Tok::Op && t.text == "(") ++depth;
          if (t.kind == Tok::Op && t.text == ")") --depth;
          lx.next();
        }
        const int stop = lx.at_end() ? static_cast<int>(line.size()) + 1 : lx.peek().column;
        if (stop == start) lx.fail(start, "empty guard");
        // Keep column alignment by padding with spaces.
        d.guard_text = std::string(start - 1, ' ') + line.substr(start - 1, stop - start);
      }
      if (lx.accept_word("reset")) {
        lx.expect_op("{");
        while (!lx.accept_op("}")) {
          const Token t = lx.peek();
          d.resets.emplace_back(lx.expect_word("a clock name"), t.column);
          if (!lx.accept_op(",") && !(lx.peek().kind == Tok::Op && lx.peek().text == "}"))
            lx.fail(lx.peek().column, "expected ',' or '}'");
        }
      }
      if (lx.accept_word("priority")) d.priority = static_cast<int>(lx.expect_int("a priority"));
      if (!lx.at_end()) lx.fail(lx.peek().column, "unexpected '" + lx.peek().text + "'");
      trans.push_back(std::move(d));
    } else {
      lx.fail(head.column, "unknown keyword '" + kw + "'");
    }
  }

  auto fail_at = [](int line, const std::string& msg) -> void {
    throw InputError("line " + std::to_string(line) + ", column 1: " + msg);
  };
  if (!name) fail_at(line_no + 1, "missing 'ta' line");
  if (!have_alphabet || ta.alphabet.empty()) fail_at(line_no + 1, "missing alphabet");
  if (!kind) fail_at(line_no + 1, "missing 'acceptance' line");
  for (const auto& q : state_order)
    if (!states[q].line) fail_at(first_use[q], "undeclared state '" + q + "'");
  // Without an 'initial' line the first state mentioned is initial.
  if (!initial && state_order.empty()) fail_at(line_no + 1, "missing 'initial' line");
  if (!initial) initial = state_order.front();
  ta.name = *name;
  ta.acceptance.kind = *kind;

  std::map<std::string, ClockId> clock_ids;
  for (ClockId c = 0; c < ta.num_clocks(); ++c) clock_ids[ta.clocks[c]] = c;
  std::map<std::string, StateId> state_ids;
  bool any_owner = false;
  for (const auto& q : state_order) {
    const StateDecl& d = states[q];
    state_ids[q] = ta.num_states();
    ta.states.push_back(q);
    int mark = *kind == AcceptanceKind::Safety ? 1 : 0;
    if (d.mark) {
      const std::string& w = d.mark_word;
      bool ok = (w == "priority") == (*kind == AcceptanceKind::Parity);
      if (w == "safe" || w == "unsafe") ok = *kind == AcceptanceKind::Safety;
      if ((w == "final" || w == "accepting") &&
          (*kind == AcceptanceKind::Safety || *kind == AcceptanceKind::Parity))
        ok = false;
      if (!ok) fail_at(d.line, "attribute '" + w + "' does not fit " + to_string(*kind) + " acceptance");
      mark = *d.mark;
    }
    ta.acceptance.marks.push_back(mark);
    any_owner = any_owner || d.owner.has_value();
  }
  ta.initial = state_ids[*initial];
  (void)initial_line;
  if (any_owner) {
    std::vector<Player> owners;
    for (const auto& q : state_order) owners.push_back(states[q].owner.value_or(Player::One));
    doc.owners = std::move(owners);
  }

  struct Pending {
    StateId src, dst;
    Guard g;
    LetterId a;
    std::vector<ClockId> resets;
    std::optional<int> priority;
  };
  std::vector<Pending> pending;
  bool any_priority = false;
  for (const auto& d : trans) {
    auto letter = ta.find_letter(d.letter);
    if (!letter)
      throw InputError("line " + std::to_string(d.line) + ", column " + std::to_string(d.letter_col) +
                       ": unknown letter '" + d.letter + "'");
    std::vector<ClockId> resets;
    for (const auto& [c, col] : d.resets) {
      auto it = clock_ids.find(c);
      if (it == clock_ids.end())
        throw InputError("line " + std::to_string(d.line) + ", column " + std::to_string(col) +
                         ": unknown clock '" + c + "'");
      resets.push_back(it->second);
    }
    Dnf dnf{{}};
    if (!d.guard_text.empty()) {
      Lexer lx(d.guard_text, d.line);
      GuardParser gp(lx, clock_ids);
      dnf = gp.parse();
      if (!lx.at_end()) lx.fail(lx.peek().column, "unexpected '" + lx.peek().text + "' in guard");
    }
    if (d.priority) {
      if (*kind != AcceptanceKind::Parity) fail_at(d.line, "transition priorities need parity acceptance");
      any_priority = true;
    }
    for (auto& conj : dnf) {
      Guard g(std::move(conj));
      if (!satisfiable(g, ta.num_clocks())) continue;
      pending.push_back({state_ids[d.src], state_ids[d.dst], g, *letter, resets, d.priority});
    }
  }

  if (any_priority) {
    // Retarget prioritised transitions to copies "q^N" carrying priority N.
    std::map<std::pair<StateId, int>, StateId> copies;
    std::vector<std::pair<StateId, StateId>> copy_of;  // (copy, original)
    for (auto& p : pending) {
      if (!p.priority) continue;
      auto key = std::make_pair(p.dst, *p.priority);
      auto it = copies.find(key);
      if (it == copies.end()) {
        StateId id = ta.num_states();
        ta.states.push_back(ta.states[p.dst] + "^" + std::to_string(*p.priority));
        ta.acceptance.marks.push_back(*p.priority);
        if (doc.owners) doc.owners->push_back((*doc.owners)[p.dst]);
        it = copies.emplace(key, id).first;
        copy_of.emplace_back(id, p.dst);
      }
      p.dst = it->second;
    }
    const std::size_t base = pending.size();
    for (const auto& [copy, orig] : copy_of)
      for (std::size_t i = 0; i < base; ++i)
        if (pending[i].src == orig) {
          Pending dup = pending[i];
          dup.src = copy;
          pending.push_back(std::move(dup));
        }
  }
  for (auto& p : pending) ta.add_transition(p.src, p.g, p.a, p.resets, p.dst);
  ta.check_well_formed();
  return doc;
}

TaDocument load_ta(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_ta(ss.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string guard_to_string(const Guard& g, const std::vector<std::string>& clocks) {
  if (g.is_true()) return "true";
  std::string s;
  const auto& atoms = g.atoms();
  std::vector<bool> merged(atoms.size(), false);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (merged[i]) continue;
    const auto& a = atoms[i];
    const char* rel = symbol(a.rel);
    if (a.rel == Relation::Le || a.rel == Relation::Ge)
      for (std::size_t j = i + 1; j < atoms.size(); ++j) {
        const auto& b = atoms[j];
        if (!merged[j] && b.left == a.left && b.right == a.right && b.bound == a.bound &&
            (b.rel == Relation::Le || b.rel == Relation::Ge) && b.rel != a.rel) {
          merged[j] = true;
          rel = "==";
          break;
        }
      }
    if (!s.empty()) s += " & ";
    s += clocks[a.left];
    if (a.is_diagonal()) s += " - " + clocks[a.right];
    s += std::string(" ") + rel + " " + std::to_string(a.bound);
  }
  return s;
}

std::string print_ta(const TaDocument& doc) {
  const TimedAutomaton& ta = doc.ta;
  std::ostringstream out;
  out << "ta " << ta.name << "\n";
  out << "clocks";
  for (const auto& c : ta.clocks) out << ' ' << c;
  out << "\nalphabet";
  for (const auto& a : ta.alphabet) out << ' ' << a;
  out << "\nacceptance " << to_string(ta.acceptance.kind) << "\n";
  out << "initial " << ta.states[ta.initial] << "\n";
  for (StateId q = 0; q < ta.num_states(); ++q) {
    out << "state " << ta.states[q];
    const int m = ta.acceptance.marks[q];
    switch (ta.acceptance.kind) {
      case AcceptanceKind::Safety: out << (m ? " safe" : " unsafe"); break;
      case AcceptanceKind::Reachability: out << (m ? " final" : ""); break;
      case AcceptanceKind::Buchi:
      case AcceptanceKind::CoBuchi: out << (m ? " accepting" : ""); break;
      case AcceptanceKind::Parity: out << " priority " << m; break;
    }
    if (doc.owners) out << " owner " << ((*doc.owners)[q] == Player::One ? "P1" : "P2");
    out << "\n";
  }
  for (const auto& t : ta.transitions) {
    out << "trans " << ta.states[t.source] << " -> " << ta.states[t.target] << " on " << ta.alphabet[t.letter];
    if (!t.guard.is_true()) out << " when " << guard_to_string(t.guard, ta.clocks);
    if (!t.resets.empty()) {
      out << " reset {";
      for (std::size_t i = 0; i < t.resets.size(); ++i) out << (i ? ", " : "") << ta.clocks[t.resets[i]];
      out << "}";
    }
    out << "\n";
  }
  return out.str();
}

std::string print_ta(const TimedAutomaton& ta) { return print_ta(TaDocument{ta, std::nullopt}); }

}  // namespace hdta
