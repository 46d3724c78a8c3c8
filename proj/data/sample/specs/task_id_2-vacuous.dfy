method SharedElements(a: array<int>, b: array<int>) returns (result: seq<int>)
  ensures true
