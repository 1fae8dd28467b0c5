x = 7
if x / 2 * 2 == x:
    print("Even")
if x / 2 * 2 != x:
    print("Odd")
