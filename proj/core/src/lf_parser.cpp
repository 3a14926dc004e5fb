#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

#include "tablesem/errors.hpp"
#include "tablesem/logical_form.hpp"
#include "tablesem/table.hpp"

namespace tablesem {
namespace {

struct Token {
  enum class Kind { LParen, RParen, Dot, Quoted, Number, Var, Hole, Ident, Op, End };
  Kind kind = Kind::End;
  std::string text;
  double num = 0.0;
  int index = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    tok_ = Token{};
    if (pos_ >= s_.size()) {
      tok_.kind = Token::Kind::End;
      return;
    }
    char c = s_[pos_];
    if (c == '(') {
      tok_.kind = Token::Kind::LParen;
      ++pos_;
      return;
    }
    if (c == ')') {
      tok_.kind = Token::Kind::RParen;
      ++pos_;
      return;
    }
    if (c == '\'') {
      ++pos_;
      std::string text;
      while (pos_ < s_.size() && s_[pos_] != '\'') {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
        text += s_[pos_++];
      }
      if (pos_ >= s_.size()) throw SyntaxError("unterminated quoted entity");
      ++pos_;
      tok_.kind = Token::Kind::Quoted;
      tok_.text = std::move(text);
      return;
    }
    if (c == '$' || c == '?') {
      bool is_var = c == '$';
      ++pos_;
      std::string digits;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_++];
      if (digits.empty()) throw SyntaxError("expected index after $ or ?");
      tok_.kind = is_var ? Token::Kind::Var : Token::Kind::Hole;
      tok_.index = std::atoi(digits.c_str());
      return;
    }
    bool neg = c == '-' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]));
    if (std::isdigit(static_cast<unsigned char>(c)) || neg) {
      std::string digits;
      if (neg) {
        digits += '-';
        ++pos_;
      }
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_++];
      if (pos_ + 1 < s_.size() && s_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
        digits += '.';
        ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_++];
      }
      tok_.kind = Token::Kind::Number;
      tok_.num = std::strtod(digits.c_str(), nullptr);
      return;
    }
    if (c == '.') {
      tok_.kind = Token::Kind::Dot;
      ++pos_;
      return;
    }
    if (c == '>' || c == '<') {
      tok_.kind = Token::Kind::Op;
      tok_.text = c;
      ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '=') {
        tok_.text += '=';
        ++pos_;
      }
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ident += s_[pos_++];
      }
      tok_.kind = Token::Kind::Ident;
      tok_.text = std::move(ident);
      return;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& text, const KnowledgeBase* kb) : lex_(text), kb_(kb) {}

  LfPtr parse() {
    LfPtr z = chain();
    if (lex_.peek().kind != Token::Kind::End) throw SyntaxError("trailing input after logical form");
    return z;
  }

 private:
  LfPtr chain() {
    LfPtr t = term();
    if (lex_.peek().kind == Token::Kind::Dot) {
      lex_.take();
      return lf::join(std::move(t), chain());
    }
    return t;
  }

  LfPtr term() {
    Token t = lex_.take();
    switch (t.kind) {
      case Token::Kind::LParen:
        return form();
      case Token::Kind::Quoted:
        return entity_from_text(t.text);
      case Token::Kind::Number:
        return lf::entity(Value::number(t.num));
      case Token::Kind::Var: {
        if (t.index >= static_cast<int>(binders_.size())) throw SyntaxError("variable reference escapes its binder");
        return lf::var(binders_[binders_.size() - 1 - static_cast<size_t>(t.index)]);
      }
      case Token::Kind::Hole:
        return lf::hole(t.index);
      case Token::Kind::Ident: {
        if (t.text == "Rows") return lf::all_rows();
        auto r = relation_from_name(t.text);
        if (r) return lf::rel(*r);
        throw SyntaxError("unknown name '" + t.text + "'");
      }
      default:
        throw SyntaxError("unexpected token in logical form");
    }
  }

  LfPtr form() {
    Token head = lex_.take();
    if (head.kind == Token::Kind::Op) {
      CmpOp op = head.text == ">"    ? CmpOp::Gt
                 : head.text == "<"  ? CmpOp::Lt
                 : head.text == ">=" ? CmpOp::Ge
                                     : CmpOp::Le;
      LfPtr pivot = chain();
      close();
      return lf::compare(op, std::move(pivot));
    }
    if (head.kind != Token::Kind::Ident) throw SyntaxError("expected operator after '('");
    const std::string& op = head.text;
    if (op == "R") {
      LfPtr b = chain();
      close();
      return lf::reverse(std::move(b));
    }
    if (op == "lambda") {
      int id = next_var_++;
      binders_.push_back(id);
      LfPtr body = chain();
      binders_.pop_back();
      close();
      return lf::lambda(id, std::move(body));
    }
    if (op == "and" || op == "or" || op == "sub" || op == "argmax" || op == "argmin") {
      LfPtr a = chain();
      LfPtr b = chain();
      close();
      if (op == "and") return lf::intersect(std::move(a), std::move(b));
      if (op == "or") return lf::set_union(std::move(a), std::move(b));
      if (op == "sub") return lf::sub(std::move(a), std::move(b));
      return lf::superlative(op == "argmax" ? SupKind::ArgMax : SupKind::ArgMin, std::move(a), std::move(b));
    }
    if (op == "count") {
      LfPtr a = chain();
      close();
      return lf::count(std::move(a));
    }
    if (op == "max" || op == "min" || op == "sum" || op == "avg") {
      LfPtr a = chain();
      close();
      AggKind k = op == "max" ? AggKind::Max : op == "min" ? AggKind::Min : op == "sum" ? AggKind::Sum : AggKind::Avg;
      return lf::aggregate(k, std::move(a));
    }
    if (op == "row") {
      Token n = lex_.take();
      if (n.kind != Token::Kind::Number) throw SyntaxError("(row ...) expects an ordinal");
      close();
      return lf::entity(Value::row_value(static_cast<int>(n.num)));
    }
    if (op == "date") {
      int parts[3];
      for (int& part : parts) {
        Token n = lex_.take();
        if (n.kind != Token::Kind::Number) throw SyntaxError("(date ...) expects three integers");
        part = static_cast<int>(n.num);
      }
      close();
      return lf::entity(Value::date_value(Date{parts[0], parts[1], parts[2]}));
    }
    if (op == "str") {
      Token s = lex_.take();
      if (s.kind != Token::Kind::Quoted) throw SyntaxError("(str ...) expects a quoted string");
      close();
      return lf::entity(Value::text(s.text));
    }
    throw SyntaxError("unknown form '" + op + "'");
  }

  LfPtr entity_from_text(const std::string& raw) {
    const std::string norm = normalize_text(raw);
    if (kb_ != nullptr) {
      if (const Value* cell = kb_->find_cell_by_normalized(norm)) return lf::entity(*cell);
    }
    return lf::entity(Value::cell(slugify(norm), raw));
  }

  void close() {
    if (lex_.take().kind != Token::Kind::RParen) throw SyntaxError("expected ')'");
  }

  Lexer lex_;
  const KnowledgeBase* kb_;
  std::vector<int> binders_;
  int next_var_ = 0;
};

}  // namespace

LfPtr parse_lf(const std::string& text, const KnowledgeBase* kb) { return Parser(text, kb).parse(); }

}  // namespace tablesem
