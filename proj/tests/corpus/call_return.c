int g = 0;

int bump() {
  g = g + 1;
  return g;
}

int wrap() {
  return bump();
}

int main() {
  int v = wrap();
  assert(v == g);
  return 0;
}
