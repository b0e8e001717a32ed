int main() {
  int i = __VERIFIER_nondet_int();
  if (i < 0) {
    i = 0;
  }
  while (i > 0) {
    i = i - 1;
  }
  assert(i == 0);
  return 0;
}
