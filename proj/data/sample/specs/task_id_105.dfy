// Flags are stored as 0 (false) and non-zero (true).
function countTo(a: array<int>, n: int): int
  requires 0 <= n <= a.Length
  reads a
  decreases n
{
  if n == 0 then 0 else countTo(a, n - 1) + (if a[n - 1] != 0 then 1 else 0)
}

method CountTrue(a: array<int>) returns (result: int)
  ensures result == countTo(a, a.Length)
