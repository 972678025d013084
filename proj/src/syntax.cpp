#include "procnet/syntax.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "procnet/errors.hpp"

namespace procnet {

namespace {

enum class Tok {
  ident,
  zero,
  bang,
  question,
  question_star,
  dot,
  bar,
  lparen,
  rparen,
  lbracket,
  rbracket,
  comma,
  fat_arrow,
  arrow,
  bi_arrow,
  end,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const std::set<std::string, std::less<>> kKeywords = {"new", "lose", "dup", "duplose"};

std::string describe(const Token& t) {
  if (t.kind == Tok::end) return "end of input";
  return "'" + t.text + "'";
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int l = line;
    const int cl = col;
    auto emit = [&](Tok kind, std::size_t len) {
      out.push_back({kind, std::string(src.substr(i, len)), l, cl});
      advance(len);
    };
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      emit(Tok::ident, j - i);
      continue;
    }
    const std::string_view rest = src.substr(i);
    if (rest.starts_with("<->")) {
      emit(Tok::bi_arrow, 3);
    } else if (rest.starts_with("?*")) {
      emit(Tok::question_star, 2);
    } else if (rest.starts_with("=>")) {
      emit(Tok::fat_arrow, 2);
    } else if (rest.starts_with("->")) {
      emit(Tok::arrow, 2);
    } else if (c == '0' && !(i + 1 < src.size() && ident_char(src[i + 1]))) {
      emit(Tok::zero, 1);
    } else {
      switch (c) {
        case '!': emit(Tok::bang, 1); break;
        case '?': emit(Tok::question, 1); break;
        case '.': emit(Tok::dot, 1); break;
        case '|': emit(Tok::bar, 1); break;
        case '(': emit(Tok::lparen, 1); break;
        case ')': emit(Tok::rparen, 1); break;
        case '[': emit(Tok::lbracket, 1); break;
        case ']': emit(Tok::rbracket, 1); break;
        case ',': emit(Tok::comma, 1); break;
        default:
          throw SyntaxError(l, cl, std::string("unexpected character '") + c + "'");
      }
    }
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

struct Binder {
  bool is_channel;
  std::string name;
};

class Parser {
 public:
  Parser(std::string_view text, const Universe& universe) : toks_(lex(text)), universe_(universe) {}

  void declare(bool is_channel, const std::string& name) {
    scopes_.push_back({is_channel, name});
  }

  Process parse_all() {
    Process p = parse_par();
    if (peek().kind != Tok::end) fail(peek(), "expected end of input, found " + describe(peek()));
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw SyntaxError(t.line, t.column, msg);
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(peek(), std::string("expected ") + what + ", found " + describe(peek()));
    return take();
  }

  std::string expect_name(const char* what) {
    const Token& t = expect(Tok::ident, what);
    if (kKeywords.contains(t.text)) fail(t, std::string("expected ") + what + ", found keyword '" + t.text + "'");
    return t.text;
  }

  Process parse_par() {
    Process left = parse_prefix();
    if (peek().kind == Tok::bar) {
      take();
      Process right = parse_par();
      return parallel(std::move(left), std::move(right));
    }
    return left;
  }

  Channel resolve_channel(const Token& t) {
    std::uint32_t index = 0;
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (it->name == t.text) {
        if (!it->is_channel) {
          throw ScopeError(std::to_string(t.line) + ":" + std::to_string(t.column) +
                           ": value variable '" + t.text + "' used as a channel");
        }
        return Channel::bound(index);
      }
      if (it->is_channel) ++index;
    }
    return Channel::named(t.text);
  }

  Value resolve_value(const Token& t) {
    std::uint32_t index = 0;
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (it->name == t.text) {
        if (it->is_channel) {
          throw ScopeError(std::to_string(t.line) + ":" + std::to_string(t.column) +
                           ": channel '" + t.text + "' used as a value");
        }
        return Value::var(index);
      }
      if (!it->is_channel) ++index;
    }
    if (!universe_.contains(t.text)) {
      throw ScopeError(std::to_string(t.line) + ":" + std::to_string(t.column) +
                       ": '" + t.text + "' is neither a bound variable nor a value of the universe");
    }
    return Value::atom(t.text);
  }

  Channel parse_channel() {
    const Token& t = peek();
    expect_name("channel");
    return resolve_channel(t);
  }

  Process parse_prefix() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::zero:
        take();
        return stop();
      case Tok::lparen: {
        take();
        Process p = parse_par();
        expect(Tok::rparen, "')'");
        return p;
      }
      case Tok::ident:
        break;
      default:
        fail(t, "expected a process, found " + describe(t));
    }

    if (t.text == "new") {
      take();
      std::string name = expect_name("channel binder");
      expect(Tok::dot, "'.'");
      scopes_.push_back({true, name});
      Process body = parse_prefix();
      scopes_.pop_back();
      return restrict(std::move(body), name);
    }
    if (t.text == "lose" || t.text == "dup" || t.text == "duplose") {
      const std::string kw = take().text;
      Channel a = parse_channel();
      Process loser = distribute(a, {});
      Process duplicator = distribute(a, {a, a});
      if (kw == "lose") return loser;
      if (kw == "dup") return duplicator;
      return parallel(loser, duplicator);
    }

    Channel a = parse_channel();
    const Token& op = take();
    switch (op.kind) {
      case Tok::bang: {
        const Token& v = peek();
        expect_name("value");
        return send(std::move(a), resolve_value(v));
      }
      case Tok::question:
      case Tok::question_star: {
        std::string name = expect_name("value binder");
        expect(Tok::dot, "'.'");
        scopes_.push_back({false, name});
        Process body = parse_prefix();
        scopes_.pop_back();
        return op.kind == Tok::question ? receive(std::move(a), std::move(body), name)
                                        : repeat_receive(std::move(a), std::move(body), name);
      }
      case Tok::fat_arrow: {
        expect(Tok::lbracket, "'['");
        std::vector<Channel> targets;
        if (peek().kind != Tok::rbracket) {
          targets.push_back(parse_channel());
          while (peek().kind == Tok::comma) {
            take();
            targets.push_back(parse_channel());
          }
        }
        expect(Tok::rbracket, "']'");
        return distribute(std::move(a), std::move(targets));
      }
      case Tok::arrow:
        return distribute(std::move(a), {parse_channel()});
      case Tok::bi_arrow: {
        Channel b = parse_channel();
        return parallel(distribute(a, {b}), distribute(b, {a}));
      }
      default:
        fail(op, "expected '!', '?', '?*', '=>', '->' or '<->' after channel, found " + describe(op));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Universe& universe_;
  std::vector<Binder> scopes_;
};

class Printer {
 public:
  explicit Printer(const Process& root) {
    reserved_ = free_channels(root);
    for (const auto& a : value_atoms(root)) reserved_.insert(a);
    for (const auto& k : kKeywords) reserved_.insert(k);
  }

  void print(const Process& p, std::ostream& out) {
    switch (p.tag()) {
      case Tag::stop:
        out << '0';
        return;
      case Tag::send:
        out << channel(p.channel()) << '!' << value(p.payload());
        return;
      case Tag::receive:
      case Tag::repeat_receive: {
        const std::string name = fresh(p.hint().empty() ? "x" : p.hint());
        out << channel(p.channel()) << (p.tag() == Tag::receive ? "?" : "?*") << name << ". ";
        scope_.push_back({false, name});
        print_prefix_body(p.body(), out);
        scope_.pop_back();
        return;
      }
      case Tag::distribute: {
        out << channel(p.channel()) << " => [";
        bool first = true;
        for (const auto& t : p.targets()) {
          if (!first) out << ", ";
          first = false;
          out << channel(t);
        }
        out << ']';
        return;
      }
      case Tag::parallel:
        if (p.left().tag() == Tag::parallel) {
          out << '(';
          print(p.left(), out);
          out << ')';
        } else {
          print(p.left(), out);
        }
        out << " | ";
        print(p.right(), out);
        return;
      case Tag::restrict: {
        const std::string name = fresh(p.hint().empty() ? "t" : p.hint());
        out << "new " << name << ". ";
        scope_.push_back({true, name});
        print_prefix_body(p.body(), out);
        scope_.pop_back();
        return;
      }
    }
  }

 private:
  void print_prefix_body(const Process& body, std::ostream& out) {
    if (body.tag() == Tag::parallel) {
      out << '(';
      print(body, out);
      out << ')';
    } else {
      print(body, out);
    }
  }

  bool taken(const std::string& name) const {
    if (reserved_.contains(name)) return true;
    for (const auto& b : scope_) {
      if (b.name == name) return true;
    }
    return false;
  }

  std::string fresh(const std::string& hint) const {
    if (!taken(hint)) return hint;
    for (int i = 1;; ++i) {
      std::string candidate = hint + std::to_string(i);
      if (!taken(candidate)) return candidate;
    }
  }

  std::string channel(const Channel& c) const {
    if (c.is_free()) return c.name;
    std::uint32_t seen = 0;
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (!it->is_channel) continue;
      if (seen == c.index) return it->name;
      ++seen;
    }
    const std::uint32_t dangling = c.index - seen;
    return dangling == 0 ? "_t" : "_t" + std::to_string(dangling);
  }

  std::string value(const Value& v) const {
    if (v.is_atom()) return v.name;
    std::uint32_t seen = 0;
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->is_channel) continue;
      if (seen == v.index) return it->name;
      ++seen;
    }
    const std::uint32_t dangling = v.index - seen;
    return dangling == 0 ? "_x" : "_x" + std::to_string(dangling);
  }

  std::set<std::string> reserved_;
  std::vector<Binder> scope_;
};

}  // namespace

Process parse(std::string_view text, const Universe& universe) {
  return Parser(text, universe).parse_all();
}

Process parse_open(std::string_view text, const Universe& universe,
                   const std::vector<std::string>& channel_binders,
                   const std::vector<std::string>& value_binders) {
  Parser parser(text, universe);
  for (const auto& c : channel_binders) parser.declare(true, c);
  for (const auto& v : value_binders) parser.declare(false, v);
  return parser.parse_all();
}

Universe parse_universe(std::string_view list) {
  std::vector<std::string> atoms;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) throw ScopeError("empty entry in value list '" + std::string(list) + "'");
    if (!ident_start(cur[0]) || kKeywords.contains(cur)) {
      throw ScopeError("invalid value name '" + cur + "'");
    }
    for (char ch : cur) {
      if (!ident_char(ch)) throw ScopeError("invalid value name '" + cur + "'");
    }
    atoms.push_back(cur);
    cur.clear();
  };
  for (char c : list) {
    if (c == ',') {
      flush();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  flush();
  return Universe(std::move(atoms));
}

std::string pretty(const Process& p) {
  std::ostringstream out;
  Printer(p).print(p, out);
  return out.str();
}

}  // namespace procnet
