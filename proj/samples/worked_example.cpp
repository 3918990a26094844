#include <iostream>

#include "wreath/wreath.hpp"

using namespace wreath;

int main() {
  WreathContext ctx(3, 7);
  auto g = Permutation::parse_cycles(ctx.degree(), "(1,8,18,21,6,10,13,2,11,3,12)(4,16,19)(5,17,20)");
  std::cout << "g = " << g.to_cycle_string() << "\n";
  std::cout << "p(1)=" << gamma_part(1, 3) << " p(g(1))=" << gamma_part(g(1), 3) << " p(g(2))=" << gamma_part(g(2), 3) << "\n";
  std::cout << "in H_7: " << std::boolalpha << is_wreath_member(g, ctx) << "\n";
  std::cout << "H-support blocks:";
  for (int b : h_support(g, ctx).block_indices) std::cout << ' ' << b;
  std::cout << "\n";

  auto m = minimal_representative(g, ctx);
  std::cout << "minimal representative " << m.to_cycle_string() << "\n";
  auto t = modified_type(g, ctx);
  std::cout << "modified type " << t.key() << ", weight " << t.weight << ", lambda " << lambda_string(t) << "\n";

  // structure constants of the smallest interesting case
  auto table = compute_table(3, 2, Engine::centralizer);
  for (const auto& e : table.entries()) std::cout << e.M.key() << " * " << e.N.key() << " -> " << e.L.key() << " : " << e.value << "\n";

  auto engine = std::make_shared<CentralizerEngine>(2);
  auto a = parse_type_key(2, "2:1.2|1.2");
  auto fit = fit_structure_polynomial(a, a, empty_type(2), 2, reduced_sampler(engine));
  std::cout << "k=2: c(n) for A*A -> 0 is " << fit.polynomial.to_string() << " = " << fit.polynomial.to_falling_string() << "\n";
  return m.to_cycle_string() == "(1,8,6,10,13,2,11,3,12)" ? 0 : 1;
}
