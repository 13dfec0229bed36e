#include "modsurf/textio.hpp"

#include <cctype>
#include <sstream>

namespace modsurf {

namespace {

struct Scanner {
    std::string s;
    std::size_t i = 0;

    explicit Scanner(const std::string& text) {
        s.reserve(text.size());
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }

    bool done() const { return i >= s.size(); }
    char peek() const { return done() ? '\0' : s[i]; }
    bool eat(char c) {
        if (peek() != c) return false;
        ++i;
        return true;
    }
    void expect(char c) {
        if (!eat(c)) throw Error("parse_error", std::string("expected '") + c + "' in \"" + s + "\"");
    }
    bool eat_word(const char* w) {
        std::size_t n = std::string(w).size();
        if (s.compare(i, n, w) != 0) return false;
        i += n;
        return true;
    }
    mpz_class integer() {
        std::size_t start = i;
        if (peek() == '+' || peek() == '-') ++i;
        std::size_t digits = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++i, ++digits;
        if (digits == 0) throw Error("parse_error", "expected an integer in \"" + s + "\"");
        return mpz_class(s.substr(start, i - start));
    }
};

}  // namespace

QuadSurd parse_surd(const std::string& text) {
    Scanner sc(text);
    bool paren = sc.eat('(');
    mpz_class p = 0, c = 1, d = 0;
    bool saw_sqrt = false;

    auto parse_sqrt = [&](int sign_hint) {
        c = sign_hint;
        sc.expect('(');
        d = sc.integer();
        sc.expect(')');
        saw_sqrt = true;
    };

    if (sc.eat_word("sqrt")) {
        parse_sqrt(1);
    } else if (sc.eat_word("-sqrt")) {
        parse_sqrt(-1);
    } else {
        mpz_class first = sc.integer();
        if (sc.eat('*')) {
            if (!sc.eat_word("sqrt")) throw Error("parse_error", "expected sqrt after '*'");
            parse_sqrt(1);
            c = first;
        } else if (sc.peek() == '+' || sc.peek() == '-') {
            p = first;
            int sign = sc.eat('+') ? 1 : (sc.eat('-'), -1);
            if (sc.eat_word("sqrt")) {
                parse_sqrt(sign);
            } else {
                mpz_class coeff = sc.integer();
                sc.expect('*');
                if (!sc.eat_word("sqrt")) throw Error("parse_error", "expected sqrt after coefficient");
                parse_sqrt(1);
                c = sign * coeff;
            }
        } else {
            p = first;
        }
    }
    if (paren) sc.expect(')');
    mpz_class r = 1;
    if (sc.eat('/')) r = sc.integer();
    if (!sc.done()) throw Error("parse_error", "trailing characters in surd \"" + text + "\"");
    if (!saw_sqrt) throw Error("parse_error", "a surd needs a sqrt term: \"" + text + "\"");
    return QuadSurd::with_coefficient(p, c, d, r);
}

std::string format_surd(const QuadSurd& x) {
    // Move the sign to the numerator and, when factoring stays cheap, pull
    // the square part out of D; emission is exact either way.
    mpz_class p = x.p(), q = x.q(), d = x.d();
    mpz_class c = 1;
    if (sgn(q) < 0) {
        p = -p;
        c = -1;
        q = -q;
    }
    if (mpz_sizeinbase(d.get_mpz_t(), 2) <= 96) {
        auto [kernel, root] = squarefree_decomposition(d);
        c *= root;
        d = kernel;
    }
    mpz_class g = gcd(gcd(abs(p), abs(c)), q);
    if (g > 1) {
        p /= g;
        c /= g;
        q /= g;
    }
    std::ostringstream os;
    os << '(' << p << (sgn(c) < 0 ? "-" : "+");
    mpz_class ac = abs(c);
    if (ac != 1) os << ac << '*';
    os << "sqrt(" << d << "))/" << q;
    return os.str();
}

CFExpansion parse_cf(const std::string& text) {
    Scanner sc(text);
    sc.expect('[');
    CFExpansion e;
    if (!sc.eat('(')) {
        e.preperiod.push_back(sc.integer());
        if (!sc.eat(';')) throw Error("parse_error", "expected ';' after a0");
        while (!sc.eat('(')) {
            e.preperiod.push_back(sc.integer());
            if (!sc.eat(',')) throw Error("parse_error", "expected ',' or '(' in preperiod");
        }
    }
    e.period.push_back(sc.integer());
    while (sc.eat(',')) e.period.push_back(sc.integer());
    sc.expect(')');
    sc.expect(']');
    if (!sc.done()) throw Error("parse_error", "trailing characters in cf \"" + text + "\"");
    return e;
}

std::string format_cf(const CFExpansion& e) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < e.preperiod.size(); ++i)
        os << e.preperiod[i] << (i == 0 ? ';' : ',');
    os << '(';
    for (std::size_t i = 0; i < e.period.size(); ++i) {
        if (i) os << ',';
        os << e.period[i];
    }
    os << ")]";
    return os.str();
}

std::string format_matrix(const IntMatrix2& m) {
    std::ostringstream os;
    os << '(' << m.a << ' ' << m.b << "; " << m.c << ' ' << m.d << ')';
    return os.str();
}

IntMatrix2 parse_matrix(const std::string& text) {
    Scanner sc(text);
    IntMatrix2 m;
    m.a = sc.integer();
    sc.expect(',');
    m.b = sc.integer();
    sc.expect(',');
    m.c = sc.integer();
    sc.expect(',');
    m.d = sc.integer();
    if (!sc.done()) throw Error("parse_error", "trailing characters in matrix \"" + text + "\"");
    return m;
}

}  // namespace modsurf
