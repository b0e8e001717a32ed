int g = 0;

int div(int d) {
  int q = 0;
  while (g >= d) {
    g = g - d + 1;
    q = q + 1;
  }
  return q;
}

int main() {
  int x = __VERIFIER_nondet_int();
  g = __VERIFIER_nondet_int();
  if (x <= 0) {
    return 0;
  }
  if (g < 0) {
    return 0;
  }
  int q = div(x);
  assert(g < x);
  return 0;
}
