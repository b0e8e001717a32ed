int product(int a, int b) {
  int r = 0;
  int i = 0;
  while (i < b) {
    r = r + a;
    i = i + 1;
  }
  return a * b + 1;
}

int main() {
  int a = __VERIFIER_nondet_int();
  int b = __VERIFIER_nondet_int();
  if (b < 0) {
    return 0;
  }
  int p = product(a, b);
  assert(p == a * b);
  return 0;
}
