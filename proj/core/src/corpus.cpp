#include "inet/corpus.hpp"

namespace inet::corpus {

std::string addition_rules() {
    return "Add(x1,x2) >< S(y1) => Add(S(x1),x2) ~ y1;\n"
           "Add(x1,x2) >< Z => x1 ~ x2;\n";
}

std::string ackermann_rules() {
    return "A(x,r) >< Z => r ~ S(x);\n"
           "A(x,r) >< S(y) => A2(S(y),r) ~ x;\n"
           "A2(x,r) >< Z => Pred(A(S(Z),r)) ~ x;\n"
           "A2(x,r) >< S(y) => x ~ Dup(A(y,w),Pred(A(w,r)));\n"
           "Dup(a,b) >< Z => a ~ Z, b ~ Z;\n"
           "Dup(a,b) >< S(x) => a ~ S(u), b ~ S(v), Dup(u,v) ~ x;\n"
           "Pred(z) >< S(x) => z ~ x;\n";
}

std::string insertion_sort_rules() {
    return "I{x}(r) >< Nil => r ~ Cons{x}(Nil);\n"
           "I{x}(r) >< Cons{y}(t) | x <= y => r ~ Cons{x}(Cons{y}(t));\n"
           "I{x}(r) >< Cons{y}(t) | x > y => r ~ Cons{y}(w), I{x}(w) ~ t;\n"
           "IS(r) >< Nil => r ~ Nil;\n"
           "IS(r) >< Cons{x}(t) => I{x}(r) ~ w, IS(w) ~ t;\n";
}

std::string reverse_rules() {
    return "Rev(a,r) >< Nil => a ~ r;\n"
           "Rev(a,r) >< Cons{h}(t) => Rev(Cons{h}(a),r) ~ t;\n";
}

std::string unary(int n) {
    std::string out;
    for (int i = 0; i < n; ++i) out += "S(";
    out += "Z";
    for (int i = 0; i < n; ++i) out += ")";
    return out;
}

std::string int_list(std::span<const std::int64_t> values) {
    std::string out;
    for (std::int64_t v : values) out += "Cons{" + std::to_string(v) + "}(";
    out += "Nil";
    for (std::size_t i = 0; i < values.size(); ++i) out += ")";
    return out;
}

std::string addition_program(int m, int n) {
    return addition_rules() + "\nnet Add(" + unary(n) + ",r) ~ " + unary(m) + "; interface r;\n";
}

std::string ackermann_program(int m, int n) {
    return ackermann_rules() + "\nnet A(" + unary(n) + ",r) ~ " + unary(m) + "; interface r;\n";
}

std::string insertion_sort_program(std::span<const std::int64_t> values) {
    return insertion_sort_rules() + "\nnet IS(r) ~ " + int_list(values) + "; interface r;\n";
}

std::string reverse_program(std::span<const std::int64_t> values) {
    return reverse_rules() + "\nnet Rev(Nil,r) ~ " + int_list(values) + "; interface r;\n";
}

}  // namespace inet::corpus
