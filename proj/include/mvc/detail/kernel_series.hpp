// Generated by scripts/derive_kernel_series.py; do not edit.
#pragma once

#include <array>

namespace mvc::detail {

inline constexpr int kSeriesTerms = 14;

// eq1(x) = sum_k c_k x^(2k)
inline constexpr std::array<double, kSeriesTerms> k_eq1_series = {
    -0.6666666666666666,  // -2/3
    -0.2,  // -1/5
    -0.04047619047619048,  // -17/420
    -0.006904761904761905,  // -29/4200
    -0.0010651154401154401,  // -1181/1108800
    -0.00015344895404419213,  // -1393481/9081072000
    -2.1031850644945883e-05,  // -763967/36324288000
    -2.7752880591932877e-06,  // -133541/48117888000
    -3.5547438979914857e-07,  // -3821869001/10751460894720000
    -4.4455088383492994e-08,  // -115665628927/2601853536522240000
    -5.451608923746391e-09,  // -8388993163723/1538810520171724800000
    -6.577162419890202e-10,  // -3868248770144093/5881333808096332185600000
    -7.82638894546464e-11,  // -3682368472021807/47050670464770657484800000
    -9.203614011768182e-12,  // -269101073327718589/29238630931678908579840000000
};

// eq2(x) = sum_k c_k x^(2k)
inline constexpr std::array<double, kSeriesTerms> k_eq2_series = {
    1.0,  // 1
    0.16666666666666666,  // 1/6
    0.019444444444444445,  // 7/360
    0.00205026455026455,  // 31/15120
    0.0002099867724867725,  // 127/604800
    2.1336045641601196e-05,  // 73/3421440
    2.1633474427786596e-06,  // 1414477/653837184000
    2.192327134456764e-07,  // 8191/37362124800
    2.2213930853920414e-08,  // 16931177/762187345920000
    2.2507674795567867e-09,  // 5749691557/2554547108585472000
    2.280510770721821e-10,  // 91546277357/401428831349145600000
    2.3106421580996967e-11,  // 3324754717/143888775912161280000
    2.3411704028931947e-12,  // 1982765468311237/846912068365871834726400000
    2.3721016693292245e-13,  // 22076500342261/93067260259985915904000000
};

// eq3(x) = sum_k c_k x^(2k)
inline constexpr std::array<double, kSeriesTerms> k_eq3_series = {
    -0.5,  // -1/2
    -0.125,  // -1/8
    -0.020833333333333332,  // -1/48
    -0.002951388888888889,  // -17/5760
    -0.00038442460317460316,  // -31/80640
    -4.7605268959435624e-05,  // -691/14515200
    -5.700398495537385e-06,  // -5461/958003200
    -6.664280946585015e-07,  // -929569/1394852659200
    -7.652638623104067e-08,  // -3202291/41845579776000
    -8.665949193243974e-09,  // -221930581/25609494822912000
    -9.704699377799914e-10,  // -4722116521/4865804016353280000
    -1.0769384495214071e-10,  // -56963745931/528941518954168320000
    -1.1860508523381474e-11,  // -14717667114151/1240896803466478878720000
    -1.2978584231637168e-12,  // -2093660879252671/1613165844506422542336000000
};

// eq4(x) = sum_k c_k x^(2k)
inline constexpr std::array<double, kSeriesTerms> k_eq4_series = {
    -1.6,  // -8/5
    -0.5714285714285714,  // -4/7
    -0.14285714285714285,  // -1/7
    -0.03044733044733045,  // -211/6930
    -0.005849111206254063,  // -29509/5045040
    -0.0010393112178826464,  // -157301/151351200
    -0.00017359727064442283,  // -16079783/92626934400
    -2.7572861521133814e-05,  // -61760113/2239887686400
    -4.200631638385298e-06,  // -30359523011/7227370934784000
    -6.179267966187663e-07,  // -16640264468327/26929184103005184000
    -8.823234602816122e-08,  // -617766523408427/7001587866781347840000
    -1.2280278289216499e-08,  // -109430933144243/8911111830448988160000
    -1.671681028185284e-09,  // -342143652330193331/204670416521752360058880000
    -2.2318897343656548e-10,  // -40991951140280383531/183664768510309354684416000000
};

// eq5(x) = sum_k c_k x^(2k)
inline constexpr std::array<double, kSeriesTerms> k_eq5_series = {
    1.25,  // 5/4
    -0.25,  // -1/4
    -0.057291666666666664,  // -11/192
    -0.011111111111111112,  // -1/90
    -0.0019407242063492064,  // -313/161280
    -0.0003142912257495591,  // -2281/7257600
    -4.803050240333227e-05,  // -368107/7664025600
    -7.010681691361255e-06,  // -222247/31701196800
    -9.85961999352273e-07,  // -82516303/83691159552000
    -1.344807910431242e-07,  // -1721992561/12804747411456000
    -1.7878812039669657e-08,  // -347979181721/19463216065413120000
    -2.3259253615717123e-09,  // -2614341799163/1124000727777607680000
    -2.9701666971664724e-10,  // -67012188368663/225617600630268887040000
    -3.732329387345764e-11,  // -30104331440568841/806582922253211271168000000
};

// eq6(x) = sum_k c_k x^(2k)
inline constexpr std::array<double, kSeriesTerms> k_eq6_series = {
    -0.4,  // -2/5
    -0.02857142857142857,  // -1/35
    0.02142857142857143,  // 3/140
    0.009733044733044732,  // 1349/138600
    0.002653764885907743,  // 267767/100900800
    0.00057896435575007,  // 1752539/3027024000
    0.00011050171870958519,  // 204708709/1852538688000
    1.924699734355395e-05,  // 862222247/44797753728000
    3.134208468987853e-06,  // 1359125231539/433642256087040000
    4.845615314682873e-07,  // 260976933802873/538583682060103680000
    7.187751925692204e-08,  // 529743964972219/7370092491348787200000
    1.0307129563249438e-08,  // 118166997202277/11464588319875891200000
    1.436889359821345e-09,  // 5881774875406174993/4093408330435047201177600000
    1.9557813140126095e-10,  // 13649908647206752925951/69792612033917554780078080000000
};

// eq7(x) = sum_k c_k x^(2k)
inline constexpr std::array<double, kSeriesTerms> k_eq7_series = {
    0.0,  // 0
    -0.4,  // -2/5
    -0.09523809523809523,  // -2/21
    -0.017777777777777778,  // -4/225
    -0.002886002886002886,  // -2/693
    -0.0004285520475996666,  // -2764/6449625
    -5.985783763561541e-05,  // -4/66825
    -7.997259164392685e-06,  // -28936/3618239625
    -1.0331101551215327e-06,  // -87734/84922212375
    -1.2998936186617544e-07,  // -698444/5373085843125
    -1.601275779110882e-08,  // -310732/19405276970625
    -1.9384893246815005e-09,  // -1890912728/975456869390128125
    -2.3127991965227812e-10,  // -2631724/11378955872851875
    -2.725502698797094e-11,  // -27142241176/995861834515125703125
};

// eq8(x) = sum_k c_k x^(2k)
inline constexpr std::array<double, kSeriesTerms> k_eq8_series = {
    0.3333333333333333,  // 1/3
    -0.03333333333333333,  // -1/30
    -0.021031746031746033,  // -53/2520
    -0.004854497354497354,  // -367/75600
    -0.0008551286676286677,  // -5689/6652800
    -0.00013211290840259095,  // -7198361/54486432000
    -1.8868503202167224e-05,  // -1121539/59439744000
    -2.5560553457476117e-06,  // -8117471/3175780608000
    -3.332604589452282e-07,  // -236480428279/709596419051520000
    -4.220432090393621e-08,  // -5929710926423/140500090972200960000
    -5.2235578466742085e-09,  // -48228394603127/9232863121030348800000
    -6.346098204080232e-10,  // -22394113150293893/35288002848577993113600000
    -7.592271905175321e-11,  // -531403859736209/6999273292279932518400000
    -8.96640384483526e-12,  // -1572992236821149549/175431785590073451479040000000
};

// eq9(x) = sum_k c_k x^(2k)
inline constexpr std::array<double, kSeriesTerms> k_eq9_series = {
    0.0,  // 0
    0.3333333333333333,  // 1/3
    0.022222222222222223,  // 1/45
    0.0021164021164021165,  // 2/945
    0.00021164021164021165,  // 1/4725
    2.1377799155576935e-05,  // 2/93555
    2.1644042808063972e-06,  // 1382/638512875
    2.1925947851873778e-07,  // 4/18243225
    2.2214608789979678e-08,  // 3617/162820783125
    2.2507846516808994e-09,  // 87734/38979295480125
    2.2805151204592183e-10,  // 349222/1531329465290625
    2.3106432599002624e-11,  // 310732/13447856940643125
    2.3411706819824882e-12,  // 472728182/201919571963756521875
    2.3721017400233653e-13,  // 2631724/11094481976030578125
};

// deq1_over_x(x) = sum_k c_k x^(2k)
inline constexpr std::array<double, kSeriesTerms> k_deq1_over_x_series = {
    -0.4,  // -2/5
    -0.1619047619047619,  // -17/105
    -0.041428571428571426,  // -29/700
    -0.008520923520923521,  // -1181/138600
    -0.0015344895404419215,  // -1393481/908107200
    -0.0002523822077393506,  // -763967/3027024000
    -3.885403282870603e-05,  // -133541/3436992000
    -5.687590236786377e-06,  // -3821869001/671966305920000
    -8.001915909028739e-07,  // -115665628927/144547418695680000
    -1.0903217847492782e-07,  // -8388993163723/76940526008586240000
    -1.4469757323758444e-08,  // -3868248770144093/267333354913469644800000
    -1.8783333469115135e-09,  // -3682368472021807/1960444602698777395200000
    -2.3929396430597276e-10,  // -269101073327718589/1124562728141496483840000000
    -2.9997161764457344e-11,  // -4348205182686677270741/144953886531982613774008320000000
};

// deq2_over_x(x) = sum_k c_k x^(2k)
inline constexpr std::array<double, kSeriesTerms> k_deq2_over_x_series = {
    0.3333333333333333,  // 1/3
    0.07777777777777778,  // 7/90
    0.012301587301587301,  // 31/2520
    0.00167989417989418,  // 127/75600
    0.00021336045641601198,  // 73/342144
    2.5960169313343916e-05,  // 1414477/54486432000
    3.06925798823947e-06,  // 8191/2668723200
    3.554228936627266e-07,  // 16931177/47636709120000
    4.051381463202216e-08,  // 5749691557/141919283810304000
    4.561021541443643e-09,  // 91546277357/20071441567457280000
    5.083412747819333e-10,  // 3324754717/6540398905098240000
    5.618808966943667e-11,  // 1982765468311237/35288002848577993113600000
    6.167464340255984e-12,  // 22076500342261/3579510009999458304000000
    6.72963624318646e-13,  // 65053034220152267/96666494100652718161920000000
};

}  // namespace mvc::detail
