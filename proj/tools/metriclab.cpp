// placeholder; the experiment runner CLI is assembled after the library core
int main() { return 0; }
