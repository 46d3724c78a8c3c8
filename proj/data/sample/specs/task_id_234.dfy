method CubeVolume(l: int) returns (volume: int)
  ensures volume == l * l * l
{
  volume := l * l * l;
}
