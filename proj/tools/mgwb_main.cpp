#include <cstdio>

int main() {
  std::puts("mgwb: CLI not wired yet");
  return 1;
}
