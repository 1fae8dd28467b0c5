x = True
if x == True:
    print(True)
