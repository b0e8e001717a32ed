int a = 1;
int b = 2;

void swap() {
  int t = a;
  a = b;
  b = t;
}

int main() {
  swap();
  assert(a == 2 && b == 1);
  return 0;
}
