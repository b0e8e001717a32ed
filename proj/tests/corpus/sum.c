int sum_to(int n) {
  int s = 0;
  int k = 0;
  while (k < n) {
    k = k + 1;
    s = s + k;
  }
  return s;
}

int main() {
  int n = __VERIFIER_nondet_int();
  if (n < 0) {
    n = 0 - n;
  }
  if (n > 7) {
    n = 7;
  }
  int s = sum_to(n);
  assert(2 * s == n * (n + 1));
  return 0;
}
