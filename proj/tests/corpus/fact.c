int fact(int n) {
  int f = 1;
  int i = 1;
  while (i <= n) {
    f = f * i;
    i = i + 1;
  }
  return f;
}

int main() {
  int n = __VERIFIER_nondet_int();
  if (n < 0) {
    n = 0;
  }
  if (n > 6) {
    n = 6;
  }
  int f = fact(n);
  assert(f >= 1);
  return 0;
}
