method RemoveDuplicates(a: array<int>) returns (result: seq<int>)
  ensures forall x :: x in result <==> x in a[..]
  ensures forall i, j :: 0 <= i < j < |result| ==> result[i] != result[j]
